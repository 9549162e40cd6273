//! ST factorization `M = S T` of a nonsingular matrix into a symplectic
//! factor `S` and a reduced factor `T`.
//!
//! The elimination schedule is run unchanged on `M`. What it leaves behind
//! is `T`; the recorded generators give `S` as the reverse-order product of
//! their inverses. Unlike the symplectic case a pivot may be zero, which
//! either aborts (strict) or leaves that column unreduced (permissive).

use std::collections::BTreeSet;

use crate::elimination::{run_schedule, OnZeroPivot, PivotFailure, Stage};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::Transcript;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StMode {
    #[default]
    Strict,
    Permissive,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StOutcome<F: Field> {
    Success {
        s: Matrix<F>,
        t: Matrix<F>,
        transcript: Transcript<F>,
    },
    Failure {
        /// 1-based cycle in which the pivot vanished.
        cycle: usize,
        /// 1-based column of the vanished pivot: `cycle` for an A pivot,
        /// `l + cycle` for a D pivot.
        column: usize,
        stage: Stage,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StResult<F: Field> {
    pub outcome: StOutcome<F>,
    pub mode: StMode,
    /// Columns left unreduced in permissive mode. Always empty in strict mode.
    pub unreduced_columns: BTreeSet<usize>,
}

impl<F: Field> StResult<F> {
    pub fn is_success(&self) -> bool {
        matches!(self.outcome, StOutcome::Success { .. })
    }

    /// `(S, T)` on success.
    pub fn factors(&self) -> Option<(&Matrix<F>, &Matrix<F>)> {
        match &self.outcome {
            StOutcome::Success { s, t, .. } => Some((s, t)),
            StOutcome::Failure { .. } => None,
        }
    }
}

pub fn st_decompose<F: Field>(m: &Matrix<F>, mode: StMode) -> Result<StResult<F>> {
    let ell = m.ell()?;
    let field = m.field().clone();
    // Float determinants near zero say little; float mode relies on the
    // pivot tolerance instead.
    if field.is_exact() && field.is_zero(&m.determinant()) {
        return Err(Error::Singular);
    }
    let on_zero = match mode {
        StMode::Strict => OnZeroPivot::Abort,
        StMode::Permissive => OnZeroPivot::Skip,
    };
    let mut t = m.clone();
    let result = match run_schedule(&mut t, on_zero, false)? {
        Ok(run) => StResult {
            outcome: StOutcome::Success {
                s: run.transcript.inverse_product(&field),
                t,
                transcript: run.transcript,
            },
            mode,
            unreduced_columns: run.skipped,
        },
        Err(PivotFailure { cycle, stage }) => StResult {
            outcome: StOutcome::Failure {
                cycle,
                column: match stage {
                    Stage::APivot => cycle,
                    Stage::DPivot => ell + cycle,
                },
                stage,
            },
            mode,
            unreduced_columns: BTreeSet::new(),
        },
    };
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationReport {
    pub s_symplectic: bool,
    /// Every column outside `skipped_columns` has the reduced-matrix shape.
    pub t_reduced: bool,
    pub skipped_columns: BTreeSet<usize>,
    /// `S T = M` exactly (exact fields) or within the matrix tolerance.
    pub residual_is_zero: bool,
    /// `|S T - M|_max`
    pub residual_norm: f64,
}

impl FactorizationReport {
    pub fn is_valid(&self) -> bool {
        self.s_symplectic && self.t_reduced && self.residual_is_zero
    }
}

/// Checks a successful factorization against `m`. Returns `None` for a
/// failure outcome.
pub fn validate_factorization<F: Field>(m: &Matrix<F>, r: &StResult<F>) -> Option<FactorizationReport> {
    let (s, t) = r.factors()?;
    let t_reduced = t.ell().is_ok()
        && (1..=t.order())
            .filter(|c| !r.unreduced_columns.contains(c))
            .all(|c| t.column_has_reduced_shape(c).unwrap_or(false));
    let (residual_is_zero, residual_norm) = match s.mul(t) {
        Ok(st) if st.order() == m.order() => {
            let norm = st.sub(m).map(|d| d.max_norm()).unwrap_or(f64::INFINITY);
            (st.approx_eq(m), norm)
        }
        _ => (false, f64::INFINITY),
    };
    Some(FactorizationReport {
        s_symplectic: s.is_symplectic(),
        t_reduced,
        skipped_columns: r.unreduced_columns.clone(),
        residual_is_zero,
        residual_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elimination::eliminate;
    use crate::field::{Rational, Rationals, Reals};
    use crate::generators::random_symplectic;

    fn m(rows: &[&[i64]]) -> Matrix<Rationals> {
        Matrix::from_i64(&Rationals, rows).unwrap()
    }

    #[test]
    fn diagonal_input_is_already_reduced() {
        let input = m(&[&[2, 0], &[0, 3]]);
        let r = st_decompose(&input, StMode::Strict).unwrap();
        match &r.outcome {
            StOutcome::Success { s, t, transcript } => {
                assert_eq!(s, &Matrix::identity(&Rationals, 2));
                assert_eq!(t, &input);
                assert!(transcript.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn swap_matrix_factors_through_row_exchange() {
        let input = m(&[&[0, 1], &[1, 0]]);
        let r = st_decompose(&input, StMode::Strict).unwrap();
        let (s, t) = r.factors().unwrap();
        assert_eq!(s, &m(&[&[0, -1], &[1, 0]]));
        assert_eq!(t, &m(&[&[1, 0], &[0, -1]]));
        assert!(t.is_reduced());
        assert_eq!(s.mul(t).unwrap(), input);
        assert!(validate_factorization(&input, &r).unwrap().is_valid());
    }

    #[test]
    fn symplectic_input_matches_elimination() {
        for seed in 0..5 {
            let g = random_symplectic(&Rationals, 3, 30, seed);
            let r = st_decompose(&g, StMode::Strict).unwrap();
            let (_, t) = r.factors().unwrap();
            assert_eq!(t, &eliminate(&g).unwrap().diagonal);
        }
    }

    #[test]
    fn zero_d_pivot_strict_and_permissive() {
        // C column and A column are fine, D pivot G[3][3] = 0.
        let input = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let strict = st_decompose(&input, StMode::Strict).unwrap();
        assert_eq!(
            strict.outcome,
            StOutcome::Failure { cycle: 1, column: 3, stage: Stage::DPivot }
        );
        assert!(validate_factorization(&input, &strict).is_none());

        let loose = st_decompose(&input, StMode::Permissive).unwrap();
        // cycle 2 meets the same zero D pivot
        assert_eq!(loose.unreduced_columns, BTreeSet::from([3, 4]));
        let report = validate_factorization(&input, &loose).unwrap();
        assert!(report.is_valid());
        let (_, t) = loose.factors().unwrap();
        assert_eq!(t.unreduced_columns().unwrap(), loose.unreduced_columns);
    }

    #[test]
    fn zero_a_pivot_after_permissive_skip() {
        // Cycle 1 skips the D step; column 2 then lives only in rows 1 and 3,
        // so cycle 2 has no A pivot either.
        let input = m(&[&[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 0, 1]]);
        let strict = st_decompose(&input, StMode::Strict).unwrap();
        assert_eq!(
            strict.outcome,
            StOutcome::Failure { cycle: 1, column: 3, stage: Stage::DPivot }
        );
        let loose = st_decompose(&input, StMode::Permissive).unwrap();
        assert_eq!(loose.unreduced_columns, BTreeSet::from([2, 3]));
        assert!(validate_factorization(&input, &loose).unwrap().is_valid());
        let (_, t) = loose.factors().unwrap();
        assert_eq!(t.unreduced_columns().unwrap(), loose.unreduced_columns);
    }

    #[test]
    fn zero_a_pivot_in_float_mode() {
        // Column 1 is below the pivot tolerance everywhere.
        let f = Reals::default();
        let input = Matrix::from_rows(&f, vec![vec![1e-12, 1.0], vec![1e-12, 2.0]]).unwrap();
        let r = st_decompose(&input, StMode::Strict).unwrap();
        assert_eq!(r.outcome, StOutcome::Failure { cycle: 1, column: 1, stage: Stage::APivot });
        let loose = st_decompose(&input, StMode::Permissive).unwrap();
        assert!(loose.unreduced_columns.contains(&1));
        assert!(validate_factorization(&input, &loose).unwrap().s_symplectic);
    }

    #[test]
    fn singular_and_odd_inputs_are_rejected() {
        assert_eq!(st_decompose(&m(&[&[1, 2], &[2, 4]]), StMode::Strict), Err(Error::Singular));
        assert_eq!(
            st_decompose(&Matrix::identity(&Rationals, 3), StMode::Strict),
            Err(Error::OddOrder(3))
        );
    }

    #[test]
    fn tampered_factor_is_flagged() {
        let input = m(&[&[3, 1, 4, 1], &[5, 9, 2, 6], &[5, 3, 5, 8], &[9, 7, 9, 3]]);
        let mut r = st_decompose(&input, StMode::Permissive).unwrap();
        assert!(validate_factorization(&input, &r).unwrap().residual_is_zero);
        if let StOutcome::Success { t, .. } = &mut r.outcome {
            t[(0, 0)] += Rational::from(1);
        }
        let report = validate_factorization(&input, &r).unwrap();
        assert!(!report.residual_is_zero);
        assert!(report.residual_norm > 0.0);
    }

    #[test]
    fn float_factorization() {
        let f = Reals::default();
        let input = Matrix::from_rows(
            &f,
            vec![
                vec![2.0, 1.0, 0.5, -1.0],
                vec![1.0, 3.0, 0.0, 2.0],
                vec![0.5, -1.0, 4.0, 1.0],
                vec![1.5, 0.0, 1.0, 2.5],
            ],
        )
        .unwrap();
        let r = st_decompose(&input, StMode::Strict).unwrap();
        let report = validate_factorization(&input, &r).unwrap();
        assert!(report.is_valid(), "{report:?}");
        assert!(report.residual_norm < 1e-12);
    }
}
