//! Text formats for matrices and transcripts.
//!
//! Matrix file: an optional header `# field: rational|float|float:EPS|gfp:P`,
//! then `2l` lines of `2l` whitespace-separated scalar literals. Other lines
//! starting with `#` and blank lines are ignored.
//!
//! Transcript file: one generator per line, `E i j alpha`, `F i j alpha` or
//! `H i j alpha`, in application order.

use crate::error::{Error, Result};
use crate::field::{Field, FieldConfig};
use crate::generators::{Generator, GeneratorKind, Transcript};
use crate::matrix::Matrix;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-comment lines with their 1-based line numbers, split into tokens
/// carrying 1-based character columns.
fn tokenized(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(idx, line)| {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((line[..s].chars().count() + 1, &line[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        Some((idx + 1, tokens))
    })
}

/// Field declared by a `# field: ...` header line, if any.
pub fn header_field(text: &str) -> Result<Option<FieldConfig>> {
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let Some(comment) = trimmed.strip_prefix('#') else {
            break;
        };
        if let Some(decl) = comment.trim().strip_prefix("field:") {
            return decl
                .trim()
                .parse::<FieldConfig>()
                .map(Some)
                .map_err(|e| parse_error(idx + 1, 1, e.to_string()));
        }
    }
    Ok(None)
}

/// The header's field when present, otherwise `default`.
pub fn resolve_field(text: &str, default: FieldConfig) -> Result<FieldConfig> {
    Ok(header_field(text)?.unwrap_or(default))
}

pub fn parse_matrix_file<F: Field>(text: &str, field: &F) -> Result<Matrix<F>> {
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut width = None;
    let mut last_line = 0;
    for (line, tokens) in tokenized(text) {
        last_line = line;
        let expected = *width.get_or_insert(tokens.len());
        if tokens.len() != expected {
            let column = tokens.get(expected).map_or_else(
                || tokens.last().map_or(1, |(c, t)| c + t.chars().count()),
                |(c, _)| *c,
            );
            return Err(parse_error(
                line,
                column,
                format!("ragged row: expected {expected} entries, found {}", tokens.len()),
            ));
        }
        let row = tokens
            .iter()
            .map(|(column, tok)| field.parse(tok).map_err(|e| parse_error(line, *column, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return Err(parse_error(1, 1, "no matrix rows"));
    }
    if width != Some(n) {
        return Err(parse_error(
            last_line,
            1,
            format!("not square: {n} rows of {} entries", width.unwrap_or(0)),
        ));
    }
    if n % 2 != 0 {
        return Err(parse_error(last_line, 1, format!("odd order {n}")));
    }
    Matrix::from_rows(field, rows)
}

pub fn write_matrix_file<F: Field>(x: &Matrix<F>) -> String {
    let f = x.field();
    let mut out = String::new();
    for row in x.rows() {
        let cells: Vec<String> = row.iter().map(|e| f.format(e)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_transcript<F: Field>(t: &Transcript<F>, field: &F) -> String {
    t.steps()
        .iter()
        .map(|g| {
            let (i, j) = g.indices();
            format!("{} {i} {j} {}\n", g.kind().letter(), field.format(g.alpha()))
        })
        .collect()
}

pub fn parse_transcript<F: Field>(text: &str, field: &F, ell: usize) -> Result<Transcript<F>> {
    let mut t = Transcript::new(ell);
    for (line, tokens) in tokenized(text) {
        let [(kc, kind), (ic, i), (jc, j), (ac, alpha)] = tokens[..] else {
            return Err(parse_error(line, 1, "expected `KIND i j alpha`"));
        };
        let kind = match kind {
            "E" => GeneratorKind::E,
            "F" => GeneratorKind::F,
            "H" => GeneratorKind::H,
            other => return Err(parse_error(line, kc, format!("unknown generator kind {other:?}"))),
        };
        let i: usize = i.parse().map_err(|_| parse_error(line, ic, format!("bad index {i:?}")))?;
        let j: usize = j.parse().map_err(|_| parse_error(line, jc, format!("bad index {j:?}")))?;
        let alpha = field.parse(alpha).map_err(|e| parse_error(line, ac, e.to_string()))?;
        let g = Generator::new(field, kind, ell, i, j, alpha).map_err(|e| parse_error(line, ic, e.to_string()))?;
        t.push(g);
    }
    Ok(t)
}
