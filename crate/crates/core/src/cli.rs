//! The `sympl` command line tool.
//!
//! Exit codes: 0 success, 1 usage/file/parse error, 2 a required predicate
//! is false (input not symplectic, singular input, or `check` on a
//! non-symplectic matrix), 3 the ST decomposition failed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::conjugate::conjugate_by_symplectic;
use crate::elimination::{eliminate_with, reconstruct_from_transcript, EliminationOptions};
use crate::error::Error;
use crate::field::{Field, FieldConfig, PrimeField, Rationals, Reals};
use crate::generators::random_symplectic;
use crate::io::{parse_matrix_file, parse_transcript, resolve_field, write_matrix_file, write_transcript};
use crate::stfactor::{st_decompose, StMode, StOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PREDICATE: i32 = 2;
pub const EXIT_ST_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "sympl", version, about = "Symplectic elimination and ST decomposition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report symplectic / reduced / diagonal-symplectic predicates.
    Check {
        file: PathBuf,
        #[arg(long)]
        field: Option<FieldConfig>,
    },
    /// Reduce a symplectic matrix to diagonal form.
    Eliminate {
        file: PathBuf,
        #[arg(long)]
        field: Option<FieldConfig>,
        /// Write the generator transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Verify intermediate milestones while eliminating.
        #[arg(long)]
        checked: bool,
    },
    /// Factor a nonsingular matrix as S T.
    St {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
        mode: ModeArg,
        #[arg(long)]
        s_out: Option<PathBuf>,
        #[arg(long)]
        t_out: Option<PathBuf>,
        #[arg(long)]
        field: Option<FieldConfig>,
    },
    /// Compute S^-1 M S.
    Conjugate {
        #[arg(long = "m")]
        m: PathBuf,
        #[arg(long = "s")]
        s: PathBuf,
        #[arg(long)]
        field: Option<FieldConfig>,
    },
    /// Write a random symplectic matrix.
    Gen {
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        ops: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        field: Option<FieldConfig>,
    },
    /// Apply a transcript to a matrix.
    Reconstruct {
        file: PathBuf,
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long)]
        field: Option<FieldConfig>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(Error::NotSymplectic | Error::Singular) => EXIT_PREDICATE,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

type CliResult = Result<i32, CliError>;

struct Streams<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Streams<'_> {
    fn out(&mut self, text: &str) -> Result<(), CliError> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
    }

    fn err(&mut self, text: &str) {
        // diagnostics are best effort
        let _ = self.err.write_all(text.as_bytes());
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { .. } => CliError::Usage(format!("{}: {e}", path.display())),
        other => CliError::Domain(other),
    }
}

fn field_for(text: &str, flag: Option<FieldConfig>) -> Result<FieldConfig, CliError> {
    Ok(resolve_field(text, flag.unwrap_or(FieldConfig::Rational))?)
}

macro_rules! with_field {
    ($cfg:expr, $f:ident => $body:expr) => {
        match $cfg {
            FieldConfig::Rational => {
                let $f = Rationals;
                $body
            }
            FieldConfig::PrimeField(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
            FieldConfig::Float(eps) => {
                let $f = Reals::new(eps)?;
                $body
            }
        }
    };
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn check<F: Field>(field: F, path: &Path, text: &str, io: &mut Streams) -> CliResult {
    let x = parse_matrix_file(text, &field).map_err(|e| with_path(path, e))?;
    let symplectic = x.is_symplectic();
    io.out(&format!(
        "symplectic: {}\nreduced: {}\ndiagonal-symplectic: {}\n",
        yes_no(symplectic),
        yes_no(x.is_reduced()),
        yes_no(x.is_diagonal_symplectic())
    ))?;
    Ok(if symplectic { EXIT_OK } else { EXIT_PREDICATE })
}

fn run_eliminate<F: Field>(
    field: F,
    path: &Path,
    text: &str,
    transcript: Option<&Path>,
    checked: bool,
    io: &mut Streams,
) -> CliResult {
    let g = parse_matrix_file(text, &field).map_err(|e| with_path(path, e))?;
    let r = eliminate_with(&g, EliminationOptions { checked })?;
    if let Some(out) = transcript {
        write(out, &write_transcript(&r.transcript, &field))?;
    }
    if !field.is_exact() {
        io.err(&format!("residual: {:e}\n", r.residual));
    }
    io.out(&write_matrix_file(&r.diagonal))?;
    Ok(EXIT_OK)
}

fn run_st<F: Field>(
    field: F,
    path: &Path,
    text: &str,
    mode: StMode,
    s_out: Option<&Path>,
    t_out: Option<&Path>,
    io: &mut Streams,
) -> CliResult {
    let m = parse_matrix_file(text, &field).map_err(|e| with_path(path, e))?;
    let r = st_decompose(&m, mode)?;
    match &r.outcome {
        StOutcome::Failure { cycle, column, stage } => {
            io.err(&format!(
                "ST decomposition failed at column {column} (cycle {cycle}): zero {stage}\n"
            ));
            Ok(EXIT_ST_FAILURE)
        }
        StOutcome::Success { s, t, .. } => {
            for (label, matrix, dest) in [("S", s, s_out), ("T", t, t_out)] {
                let text = write_matrix_file(matrix);
                match dest {
                    Some(p) => write(p, &text)?,
                    None => io.out(&format!("# {label}\n{text}"))?,
                }
            }
            if !r.unreduced_columns.is_empty() {
                let cols: Vec<String> = r.unreduced_columns.iter().map(|c| c.to_string()).collect();
                io.err(&format!("unreduced columns: {}\n", cols.join(" ")));
            }
            Ok(EXIT_OK)
        }
    }
}

fn run_conjugate<F: Field>(field: F, paths: (&Path, &Path), texts: (&str, &str), io: &mut Streams) -> CliResult {
    let m = parse_matrix_file(texts.0, &field).map_err(|e| with_path(paths.0, e))?;
    let s = parse_matrix_file(texts.1, &field).map_err(|e| with_path(paths.1, e))?;
    let out = conjugate_by_symplectic(&m, &s)?;
    io.out(&write_matrix_file(&out))?;
    Ok(EXIT_OK)
}

fn run_reconstruct<F: Field>(field: F, paths: (&Path, &Path), texts: (&str, &str), io: &mut Streams) -> CliResult {
    let g = parse_matrix_file(texts.0, &field).map_err(|e| with_path(paths.0, e))?;
    let ell = g.ell()?;
    let t = parse_transcript(texts.1, &field, ell).map_err(|e| with_path(paths.1, e))?;
    io.out(&write_matrix_file(&reconstruct_from_transcript(&t, &g)?))?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, io: &mut Streams) -> CliResult {
    match cli.command {
        Command::Check { file, field } => {
            let text = read(&file)?;
            with_field!(field_for(&text, field)?, f => check(f, &file, &text, io))
        }
        Command::Eliminate {
            file,
            field,
            transcript,
            checked,
        } => {
            let text = read(&file)?;
            with_field!(field_for(&text, field)?, f => {
                run_eliminate(f, &file, &text, transcript.as_deref(), checked, io)
            })
        }
        Command::St {
            file,
            mode,
            s_out,
            t_out,
            field,
        } => {
            let text = read(&file)?;
            let mode = match mode {
                ModeArg::Strict => StMode::Strict,
                ModeArg::Permissive => StMode::Permissive,
            };
            with_field!(field_for(&text, field)?, f => {
                run_st(f, &file, &text, mode, s_out.as_deref(), t_out.as_deref(), io)
            })
        }
        Command::Conjugate { m, s, field } => {
            let (m_text, s_text) = (read(&m)?, read(&s)?);
            let m_cfg = field_for(&m_text, field)?;
            let s_cfg = field_for(&s_text, field)?;
            if m_cfg != s_cfg {
                return Err(CliError::Usage(format!(
                    "field mismatch: {} is over {m_cfg}, {} is over {s_cfg}",
                    m.display(),
                    s.display()
                )));
            }
            with_field!(m_cfg, f => run_conjugate(f, (&m, &s), (&m_text, &s_text), io))
        }
        Command::Gen { ell, ops, seed, field } => {
            if ell == 0 {
                return Err(CliError::Usage("--ell must be at least 1".into()));
            }
            with_field!(field.unwrap_or(FieldConfig::Rational), f => {
                io.out(&write_matrix_file(&random_symplectic(&f, ell, ops, seed)))?;
                Ok(EXIT_OK)
            })
        }
        Command::Reconstruct { file, transcript, field } => {
            let text = read(&file)?;
            let t_text = read(&transcript)?;
            with_field!(field_for(&text, field)?, f => {
                run_reconstruct(f, (&file, &transcript), (&text, &t_text), io)
            })
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut io = Streams { out, err };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.to_string();
            return if e.use_stderr() {
                io.err(&text);
                EXIT_USAGE
            } else {
                let _ = io.out(&text);
                EXIT_OK
            };
        }
    };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            io.err(&format!("error: {e}\n"));
            e.exit_code()
        }
    }
}
