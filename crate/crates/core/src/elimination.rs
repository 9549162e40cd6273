//! Symplectic elimination: reduce a symplectic matrix to a diagonal matrix
//! using only left multiplication by elementary generators.
//!
//! Cycle `j = 1..=l` clears column `j` (first its C part, then its A part
//! below the pivot) and then column `l+j` (D part below the pivot, then the
//! B part). For symplectic input the remaining entries of rows `j` and
//! `l+j` vanish on their own, so after `l` cycles only the diagonal is left.
//!
//! The same step schedule drives the ST factorization in
//! [`crate::stfactor`], where the input is an arbitrary nonsingular matrix
//! and a zero pivot is a genuine outcome rather than a defect.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::{row_exchange_sequence, Generator, GeneratorKind, Transcript};
use crate::matrix::Matrix;

/// Which pivot of a cycle was unusable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Column `j` of A has no nonzero entry in rows `j..=l` after the C step.
    APivot,
    /// `G[l+j][l+j] = 0` when the D and B steps need it.
    DPivot,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::APivot => write!(f, "A-pivot"),
            Stage::DPivot => write!(f, "D-pivot"),
        }
    }
}

/// What the schedule does when a pivot is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum OnZeroPivot {
    Abort,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PivotFailure {
    pub cycle: usize,
    pub stage: Stage,
}

pub(crate) struct ScheduleRun<F: Field> {
    pub transcript: Transcript<F>,
    /// 1-based columns whose reduction was skipped.
    pub skipped: BTreeSet<usize>,
}

struct Schedule<'a, F: Field> {
    g: &'a mut Matrix<F>,
    field: F,
    ell: usize,
    transcript: Transcript<F>,
    checked: bool,
}

impl<F: Field> Schedule<'_, F> {
    fn at(&self, r: usize, c: usize) -> &F::Elem {
        &self.g[(r - 1, c - 1)]
    }

    /// Records and applies a generator unless its multiplier is zero.
    fn apply(&mut self, kind: GeneratorKind, i: usize, j: usize, alpha: F::Elem) -> Result<()> {
        if alpha == self.field.zero() {
            return Ok(());
        }
        let g = Generator::new(&self.field, kind, self.ell, i, j, alpha)?;
        g.apply_left(self.g)?;
        self.transcript.push(g);
        Ok(())
    }

    /// `-num / den`
    fn neg_ratio(&self, num: (usize, usize), den: (usize, usize)) -> Result<F::Elem> {
        let f = &self.field;
        f.div(&f.neg(self.at(num.0, num.1)), self.at(den.0, den.1))
    }

    fn c_step(&mut self, j: usize) -> Result<()> {
        let ell = self.ell;
        for i in j..=ell {
            if self.field.is_zero(self.at(i, j)) {
                if !self.field.is_zero(self.at(ell + i, j)) {
                    let swap = row_exchange_sequence(&self.field, ell, i)?;
                    swap.apply_left(self.g)?;
                    self.transcript.extend(&swap);
                }
            } else {
                let alpha = self.neg_ratio((ell + i, j), (i, j))?;
                self.apply(GeneratorKind::H, i, i, alpha)?;
            }
        }
        Ok(())
    }

    /// Returns false when column `j` of A has no usable pivot.
    fn a_step(&mut self, j: usize) -> Result<bool> {
        let ell = self.ell;
        if self.field.is_zero(self.at(j, j)) {
            let Some(x) = (j + 1..=ell).find(|&x| !self.field.is_zero(self.at(x, j))) else {
                return Ok(false);
            };
            let one = self.field.one();
            self.apply(GeneratorKind::E, j, x, one)?;
        }
        for i in j + 1..=ell {
            let alpha = self.neg_ratio((i, j), (j, j))?;
            self.apply(GeneratorKind::E, i, j, alpha)?;
        }
        Ok(true)
    }

    /// Returns false when the D pivot is zero; the B step is part of the
    /// same reduction and is skipped with it.
    fn d_and_b_steps(&mut self, j: usize) -> Result<bool> {
        let ell = self.ell;
        let p = ell + j;
        if self.field.is_zero(self.at(p, p)) {
            return Ok(false);
        }
        for i in j + 1..=ell {
            let alpha = self.field.div(self.at(ell + i, p), self.at(p, p))?;
            self.apply(GeneratorKind::E, j, i, alpha)?;
        }
        for i in j..=ell {
            let alpha = self.neg_ratio((i, p), (p, p))?;
            self.apply(GeneratorKind::F, i, j, alpha)?;
        }
        Ok(true)
    }

    fn milestone(&self, j: usize, column: usize, row: usize) -> Result<()> {
        if !self.g.is_standard_column(column)? {
            return Err(Error::Defect {
                cycle: j,
                detail: format!("column {column} is not standard"),
            });
        }
        if !self.g.is_standard_row(row)? {
            return Err(Error::Defect {
                cycle: j,
                detail: format!("row {row} is not standard"),
            });
        }
        Ok(())
    }

    fn run(&mut self, on_zero: OnZeroPivot) -> Result<std::result::Result<BTreeSet<usize>, PivotFailure>> {
        let ell = self.ell;
        let mut skipped = BTreeSet::new();
        for j in 1..=ell {
            self.c_step(j)?;
            if self.a_step(j)? {
                if self.checked {
                    self.milestone(j, j, ell + j)?;
                }
            } else if on_zero == OnZeroPivot::Abort {
                return Ok(Err(PivotFailure { cycle: j, stage: Stage::APivot }));
            } else {
                skipped.insert(j);
            }
            if self.d_and_b_steps(j)? {
                if self.checked {
                    self.milestone(j, ell + j, j)?;
                    if !self.g.is_symplectic() {
                        return Err(Error::Defect {
                            cycle: j,
                            detail: "intermediate matrix is not symplectic".into(),
                        });
                    }
                }
            } else if on_zero == OnZeroPivot::Abort {
                return Ok(Err(PivotFailure { cycle: j, stage: Stage::DPivot }));
            } else {
                skipped.insert(ell + j);
            }
        }
        Ok(Ok(skipped))
    }
}

/// Runs the elimination step schedule on `g` in place.
pub(crate) fn run_schedule<F: Field>(
    g: &mut Matrix<F>,
    on_zero: OnZeroPivot,
    checked: bool,
) -> Result<std::result::Result<ScheduleRun<F>, PivotFailure>> {
    let ell = g.ell()?;
    let field = g.field().clone();
    let mut schedule = Schedule {
        g,
        field,
        ell,
        transcript: Transcript::new(ell),
        checked,
    };
    Ok(schedule.run(on_zero)?.map(|skipped| ScheduleRun {
        transcript: schedule.transcript,
        skipped,
    }))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Verify the standard row/column milestones and symplecticity after
    /// every cycle. Costs a dense product per cycle.
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EliminationResult<F: Field> {
    /// Diagonal symplectic matrix `transcript.product() * input`.
    pub diagonal: Matrix<F>,
    pub transcript: Transcript<F>,
    /// Largest off-diagonal magnitude before clamping; zero for exact fields.
    pub residual: f64,
}

impl<F: Field> EliminationResult<F> {
    pub fn input_order(&self) -> usize {
        self.diagonal.order()
    }
}

pub fn eliminate<F: Field>(g: &Matrix<F>) -> Result<EliminationResult<F>> {
    eliminate_with(g, EliminationOptions::default())
}

/// Reduces a symplectic matrix to diagonal form.
///
/// Over exact fields a non-symplectic input is reported as
/// [`Error::NotSymplectic`]. The transcript product `P` is symplectic, so
/// `P G = D` with `D` diagonal symplectic holds exactly when `G` is; the
/// check therefore happens after the run instead of as a dense product up
/// front (checked mode still tests first, since its milestones assume a
/// symplectic input).
///
/// In float mode the off-diagonal part is cleared after the run when it is
/// within the matrix tolerance relative to the diagonal, and the raw
/// residue is reported in [`EliminationResult::residual`].
pub fn eliminate_with<F: Field>(g: &Matrix<F>, opts: EliminationOptions) -> Result<EliminationResult<F>> {
    g.ell()?;
    let field = g.field().clone();
    if field.is_exact() && opts.checked && !g.is_symplectic() {
        return Err(Error::NotSymplectic);
    }
    let mut work = g.clone();
    let run = match run_schedule(&mut work, OnZeroPivot::Abort, opts.checked)? {
        Ok(run) => run,
        Err(_) if field.is_exact() => return Err(Error::NotSymplectic),
        Err(PivotFailure { cycle, stage }) => {
            return Err(Error::Defect {
                cycle,
                detail: format!("zero {stage} on symplectic input"),
            })
        }
    };

    let n = work.order();
    let diag: Vec<F::Elem> = (0..n).map(|k| work[(k, k)].clone()).collect();
    let diagonal = Matrix::diagonal(&field, &diag);
    let residual = (0..n)
        .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
        .fold(0.0f64, |m, (r, c)| m.max(field.magnitude(&work[(r, c)])));
    // Off-diagonal residue is judged against the diagonal's scale.
    if field.entries_close(work.entries(), diagonal.entries()) {
        work = diagonal;
    }
    if !work.is_diagonal_symplectic() {
        if field.is_exact() {
            return Err(Error::NotSymplectic);
        }
        return Err(Error::Defect {
            cycle: n / 2,
            detail: "result is not diagonal symplectic".into(),
        });
    }
    Ok(EliminationResult {
        diagonal: work,
        transcript: run.transcript,
        residual,
    })
}

/// Applies every transcript step to `g0` from the left, in order.
pub fn reconstruct_from_transcript<F: Field>(t: &Transcript<F>, g0: &Matrix<F>) -> Result<Matrix<F>> {
    if g0.order() != 2 * t.ell() {
        return Err(Error::DimensionMismatch {
            expected: 2 * t.ell(),
            found: g0.order(),
        });
    }
    let mut g = g0.clone();
    t.apply_left(&mut g)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, Rationals, Reals};
    use crate::generators::random_symplectic;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn identity_needs_no_steps() {
        for ell in 1..4 {
            let id = Matrix::identity(&Rationals, 2 * ell);
            let r = eliminate(&id).unwrap();
            assert_eq!(r.diagonal, id);
            assert!(r.transcript.is_empty());
            assert_eq!(r.input_order(), 2 * ell);
        }
    }

    #[test]
    fn j_form_is_one_row_exchange() {
        let f = Rationals;
        let r = eliminate(&Matrix::j_form(&f, 1)).unwrap();
        assert_eq!(r.diagonal, Matrix::diagonal(&f, &[q(-1), q(-1)]));
        assert_eq!(r.transcript, row_exchange_sequence(&f, 1, 1).unwrap());
    }

    #[test]
    fn lower_shear_is_one_h_step() {
        let f = Rationals;
        let g = Matrix::from_i64(&f, &[&[1, 0], &[1, 1]]).unwrap();
        let r = eliminate(&g).unwrap();
        assert_eq!(r.diagonal, Matrix::identity(&f, 2));
        assert_eq!(r.transcript.steps(), &[Generator::h(&f, 1, 1, 1, q(-1)).unwrap()]);
    }

    #[test]
    fn rejects_non_symplectic_and_odd_input() {
        let f = Rationals;
        let g = Matrix::from_i64(&f, &[&[2, 0], &[0, 3]]).unwrap();
        assert_eq!(eliminate(&g), Err(Error::NotSymplectic));
        assert_eq!(eliminate(&Matrix::identity(&f, 3)), Err(Error::OddOrder(3)));
        // zero D pivot and singular input both stop mid-schedule
        let d_zero = Matrix::from_i64(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]).unwrap();
        assert_eq!(eliminate(&d_zero), Err(Error::NotSymplectic));
        assert_eq!(eliminate(&Matrix::zeros(&f, 2)), Err(Error::NotSymplectic));
        // runs to completion but leaves a non-symplectic remainder
        let skew = Matrix::from_i64(&f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 5], &[0, 0, 0, 1]]).unwrap();
        assert_eq!(eliminate(&skew), Err(Error::NotSymplectic));
        assert_eq!(
            eliminate_with(&skew, EliminationOptions { checked: true }),
            Err(Error::NotSymplectic)
        );
    }

    #[test]
    fn post_check_agrees_with_dense_predicate() {
        let f = PrimeField::new(3).unwrap();
        // every 2x2 and a stride of 4x4 matrices over GF(3)
        for (n, count, stride) in [(2usize, 81u64, 1u64), (4, 3u64.pow(16), 9_973)] {
            for code in (0..count).step_by(stride as usize) {
                let mut c = code;
                let rows = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                let v = c % 3;
                                c /= 3;
                                v
                            })
                            .collect()
                    })
                    .collect();
                let g = Matrix::from_rows(&f, rows).unwrap();
                assert_eq!(eliminate(&g).is_ok(), g.is_symplectic(), "{g:?}");
            }
        }
    }

    #[test]
    fn a_step_repair_uses_first_nonzero_row() {
        // Symplectic with A = [[0,1],[1,0]], D = A^-T = A: A pivot is zero.
        let f = Rationals;
        let g = Matrix::from_i64(
            &f,
            &[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]],
        )
        .unwrap();
        assert!(g.is_symplectic());
        let r = eliminate_with(&g, EliminationOptions { checked: true }).unwrap();
        assert_eq!(r.transcript.steps()[0], Generator::e(&f, 2, 1, 2, q(1)).unwrap());
        assert!(r.diagonal.is_diagonal_symplectic());
        assert_eq!(reconstruct_from_transcript(&r.transcript, &g).unwrap(), r.diagonal);
    }

    #[test]
    fn random_rational_inputs_reconstruct() {
        let f = Rationals;
        for seed in 0..10 {
            let g = random_symplectic(&f, 4, 60, seed);
            let r = eliminate_with(&g, EliminationOptions { checked: true }).unwrap();
            assert!(r.diagonal.is_diagonal_symplectic());
            assert_eq!(reconstruct_from_transcript(&r.transcript, &g).unwrap(), r.diagonal);
            assert_eq!(r.transcript.product(&f).mul(&g).unwrap(), r.diagonal);
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn small_prime_fields_always_succeed() {
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for seed in 0..300 {
                let g = random_symplectic(&f, 2, 1 + (seed as usize % 24), seed);
                let r = eliminate_with(&g, EliminationOptions { checked: true }).unwrap();
                assert!(r.diagonal.is_diagonal_symplectic());
                assert_eq!(reconstruct_from_transcript(&r.transcript, &g).unwrap(), r.diagonal);
            }
        }
    }

    #[test]
    fn transcript_length_bound() {
        let f = PrimeField::new(5).unwrap();
        for ell in 1..=6 {
            for seed in 0..20 {
                let g = random_symplectic(&f, ell, 4 * ell * ell, seed);
                let r = eliminate(&g).unwrap();
                let per_cycle = 3 * ell + (ell - 1) + (ell - 1) + ell;
                assert!(r.transcript.len() <= ell * per_cycle);
            }
        }
    }

    #[test]
    fn float_mode_clamps_and_reports_residual() {
        let f = Reals::default();
        let g = random_symplectic(&f, 3, 30, 9);
        let r = eliminate(&g).unwrap();
        assert!(r.diagonal.is_diagonal());
        assert!(r.residual < 1e-9);
        let rebuilt = reconstruct_from_transcript(&r.transcript, &g).unwrap();
        assert!(rebuilt.approx_eq(&r.diagonal));
    }

    #[test]
    fn reconstruct_checks_dimensions() {
        let f = Rationals;
        let t = Transcript::new(2);
        let g = Matrix::identity(&f, 2);
        assert_eq!(
            reconstruct_from_transcript(&t, &g),
            Err(Error::DimensionMismatch { expected: 4, found: 2 })
        );
        let g = Matrix::identity(&f, 4);
        assert_eq!(reconstruct_from_transcript(&t, &g).unwrap(), g);
    }
}
