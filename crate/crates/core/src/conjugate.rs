//! Similarity transforms `S^-1 M S` by a symplectic `S` applied one
//! elementary factor at a time.
//!
//! Elimination gives `g_k ... g_1 S = D`, i.e. `S = g_1^-1 ... g_k^-1 D`, so
//!
//! ```text
//! S^-1 M S = D^-1 g_k ( ... (g_1 M g_1^-1) ... ) g_k^-1 D
//! ```
//!
//! Each factor costs two row operations and two column operations.

use crate::elimination::eliminate;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::generators::Transcript;
use crate::matrix::Matrix;

/// `S^-1 M S` for `S = (inverted steps of t, reverse order) * d`.
pub fn conjugate_by_transcript<F: Field>(m: &Matrix<F>, t: &Transcript<F>, d: &Matrix<F>) -> Result<Matrix<F>> {
    let n = 2 * t.ell();
    for order in [m.order(), d.order()] {
        if order != n {
            return Err(Error::DimensionMismatch { expected: n, found: order });
        }
    }
    if !d.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let f = m.field();
    let mut out = m.clone();
    for g in t.steps() {
        g.apply_left(&mut out)?;
        g.inverse(f).apply_right(&mut out)?;
    }
    for k in 0..n {
        let dk = &d[(k, k)];
        let inv = f.invert(dk).map_err(|_| Error::ZeroDiagonalEntry(k + 1))?;
        out.scale_row(k, &inv);
        out.scale_col(k, dk);
    }
    Ok(out)
}

/// `S^-1 M S` for a dense symplectic `S`, factored first by elimination.
pub fn conjugate_by_symplectic<F: Field>(m: &Matrix<F>, s: &Matrix<F>) -> Result<Matrix<F>> {
    m.check_same_order(s)?;
    let factored = eliminate(s)?;
    conjugate_by_transcript(m, &factored.transcript, &factored.diagonal)
}
