//! Dense square matrices over a [`Field`], the 2x2 block view used by the
//! symplectic algorithms, and the structural predicates.
//!
//! Element access through `m[(r, c)]` is 0-based like any Rust container.
//! Every index that names a row or column in the mathematical sense
//! (standard rows/columns, generator indices, reported failure positions)
//! is 1-based and ranges over `1..=2l`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::Field;

/// One of the four `l x l` blocks of `[[A, B], [C, D]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl Block {
    /// (row offset, column offset) in units of `l`.
    fn offsets(self) -> (usize, usize) {
        match self {
            Block::A => (0, 0),
            Block::B => (0, 1),
            Block::C => (1, 0),
            Block::D => (1, 1),
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    n: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix[{}x{}] over {}", self.n, self.n, self.field.config())?;
        for r in 0..self.n {
            let row: Vec<String> = self.row(r).iter().map(|e| self.field.format(e)).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;

    fn index(&self, (r, c): (usize, usize)) -> &F::Elem {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of bounds for order {}", self.n);
        &self.data[r * self.n + c]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F::Elem {
        assert!(r < self.n && c < self.n, "index ({r}, {c}) out of bounds for order {}", self.n);
        &mut self.data[r * self.n + c]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, n: usize) -> Self {
        Matrix {
            field: field.clone(),
            n,
            data: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: &F, diag: &[F::Elem]) -> Self {
        let mut m = Self::zeros(field, diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// The form `[[0, I], [-I, 0]]` of order `2l`.
    pub fn j_form(field: &F, ell: usize) -> Self {
        let mut m = Self::zeros(field, 2 * ell);
        for i in 0..ell {
            m[(i, ell + i)] = field.one();
            m[(ell + i, i)] = field.neg(&field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data,
        })
    }

    /// Convenience constructor from small integer entries.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, rows)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Half the order; fails for odd orders.
    pub fn ell(&self) -> Result<usize> {
        if self.n == 0 {
            Err(Error::EmptyMatrix)
        } else if !self.n.is_multiple_of(2) {
            Err(Error::OddOrder(self.n))
        } else {
            Ok(self.n / 2)
        }
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F::Elem]> {
        self.data.chunks(self.n)
    }

    pub fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            })
        }
    }

    /// `row[dst] += alpha * row[src]` (0-based, `dst != src`).
    pub fn add_scaled_row(&mut self, dst: usize, src: usize, alpha: &F::Elem) {
        debug_assert_ne!(dst, src);
        let n = self.n;
        for c in 0..n {
            let (d, s) = (dst * n + c, src * n + c);
            let src_val = self.data[s].clone();
            self.field.add_scaled(&mut self.data[d], alpha, &src_val);
        }
    }

    /// `col[dst] += alpha * col[src]` (0-based, `dst != src`).
    pub fn add_scaled_col(&mut self, dst: usize, src: usize, alpha: &F::Elem) {
        debug_assert_ne!(dst, src);
        let n = self.n;
        for r in 0..n {
            let src_val = self.data[r * n + src].clone();
            self.field.add_scaled(&mut self.data[r * n + dst], alpha, &src_val);
        }
    }

    pub fn scale_row(&mut self, r: usize, alpha: &F::Elem) {
        let n = self.n;
        for v in &mut self.data[r * n..(r + 1) * n] {
            *v = self.field.mul(alpha, v);
        }
    }

    pub fn scale_col(&mut self, c: usize, alpha: &F::Elem) {
        for r in 0..self.n {
            let v = &mut self.data[r * self.n + c];
            *v = self.field.mul(v, alpha);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let f = &self.field;
        let n = self.n;
        let mut out = Self::zeros(f, n);
        for r in 0..n {
            for k in 0..n {
                let a = &self.data[r * n + k];
                if f.is_exact() && f.is_zero(a) {
                    continue;
                }
                for c in 0..n {
                    f.add_scaled(&mut out.data[r * n + c], a, &other.data[k * n + c]);
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            n: self.n,
            data,
        })
    }

    pub fn trace(&self) -> F::Elem {
        (0..self.n).fold(self.field.zero(), |acc, i| self.field.add(&acc, &self[(i, i)]))
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data
            .iter()
            .fold(0.0f64, |m, v| m.max(self.field.magnitude(v)))
    }

    /// Equality under the field's matrix comparison: exact for exact
    /// fields, `|X - Y|_max <= tol (1 + |Y|_max)` for floats.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field.entries_close(&self.data, &other.data)
    }

    /// Determinant by fraction-free (Bareiss) elimination with row swaps.
    pub fn determinant(&self) -> F::Elem {
        let f = &self.field;
        let n = self.n;
        let mut a = self.clone();
        let mut prev = f.one();
        let mut negate = false;
        for k in 0..n {
            if f.is_zero(&a[(k, k)]) {
                match (k + 1..n).find(|&r| !f.is_zero(&a[(r, k)])) {
                    Some(r) => {
                        for c in 0..n {
                            a.data.swap(k * n + c, r * n + c);
                        }
                        negate = !negate;
                    }
                    None => return f.zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = f.sub(
                        &f.mul(&a[(i, j)], &a[(k, k)]),
                        &f.mul(&a[(i, k)], &a[(k, j)]),
                    );
                    a[(i, j)] = f.div(&t, &prev).expect("previous pivot is nonzero");
                }
                a[(i, k)] = f.zero();
            }
            prev = a[(k, k)].clone();
        }
        let det = a[(n - 1, n - 1)].clone();
        if negate {
            f.neg(&det)
        } else {
            det
        }
    }

    /// Gauss-Jordan inverse with first-nonzero pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let f = &self.field;
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(f, n);
        for k in 0..n {
            let p = (k..n)
                .find(|&r| !f.is_zero(&a[(r, k)]))
                .ok_or(Error::Singular)?;
            if p != k {
                for c in 0..n {
                    a.data.swap(k * n + c, p * n + c);
                    inv.data.swap(k * n + c, p * n + c);
                }
            }
            let pivot_inv = f.invert(&a[(k, k)])?;
            a.scale_row(k, &pivot_inv);
            inv.scale_row(k, &pivot_inv);
            for r in 0..n {
                if r != k && !f.is_zero(&a[(r, k)]) {
                    let alpha = f.neg(&a[(r, k)]);
                    a.add_scaled_row(r, k, &alpha);
                    inv.add_scaled_row(r, k, &alpha);
                }
            }
        }
        Ok(inv)
    }

    pub fn block(&self, which: Block) -> Result<BlockView<'_, F>> {
        let ell = self.ell()?;
        Ok(BlockView {
            parent: self,
            which,
            ell,
        })
    }

    pub fn block_mut(&mut self, which: Block) -> Result<BlockViewMut<'_, F>> {
        let ell = self.ell()?;
        Ok(BlockViewMut {
            parent: self,
            which,
            ell,
        })
    }

    fn check_position(&self, i: usize) -> Result<usize> {
        if (1..=self.n).contains(&i) {
            Ok(i - 1)
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                max: self.n,
            })
        }
    }

    /// Column `i` (1-based) has exactly one nonzero entry, in row `i`.
    pub fn is_standard_column(&self, i: usize) -> Result<bool> {
        let c = self.check_position(i)?;
        let f = &self.field;
        Ok((0..self.n).all(|r| (r == c) != f.is_zero(&self[(r, c)])))
    }

    /// Row `i` (1-based) has exactly one nonzero entry, in column `i`.
    pub fn is_standard_row(&self, i: usize) -> Result<bool> {
        let r = self.check_position(i)?;
        let f = &self.field;
        Ok((0..self.n).all(|c| (r == c) != f.is_zero(&self[(r, c)])))
    }

    pub fn is_diagonal(&self) -> bool {
        let f = &self.field;
        (0..self.n).all(|r| (0..self.n).all(|c| r == c || f.is_zero(&self[(r, c)])))
    }

    /// `X^T J X = J`.
    pub fn is_symplectic(&self) -> bool {
        let Ok(ell) = self.ell() else {
            return false;
        };
        let f = &self.field;
        // J X = [[C, D], [-A, -B]]
        let mut jx = Self::zeros(f, self.n);
        for r in 0..ell {
            for c in 0..self.n {
                jx[(r, c)] = self[(ell + r, c)].clone();
                jx[(ell + r, c)] = f.neg(&self[(r, c)]);
            }
        }
        let lhs = self.transpose().mul(&jx).expect("same order");
        lhs.approx_eq(&Self::j_form(f, ell))
    }

    /// Column `c` (1-based) follows the reduced-matrix pattern: entries of
    /// the A or D block strictly below the diagonal and entries of the C or
    /// B block on or below the diagonal are zero.
    pub fn column_has_reduced_shape(&self, c: usize) -> Result<bool> {
        let col = self.check_position(c)?;
        let ell = self.ell()?;
        let f = &self.field;
        let j = col % ell;
        let (upper_from, lower_from) = if col < ell {
            (j + 1, ell + j)
        } else {
            (j, ell + j + 1)
        };
        Ok((upper_from..ell)
            .chain(lower_from..self.n)
            .all(|r| f.is_zero(&self[(r, col)])))
    }

    /// A and D upper triangular, B and C upper triangular with zero diagonal.
    pub fn is_reduced(&self) -> bool {
        self.ell().is_ok()
            && (1..=self.n).all(|c| self.column_has_reduced_shape(c).unwrap_or(false))
    }

    /// Columns (1-based) that break the reduced pattern or carry a zero
    /// diagonal entry.
    pub fn unreduced_columns(&self) -> Result<BTreeSet<usize>> {
        self.ell()?;
        let f = &self.field;
        let mut out = BTreeSet::new();
        for c in 1..=self.n {
            if !self.column_has_reduced_shape(c)? || f.is_zero(&self[(c - 1, c - 1)]) {
                out.insert(c);
            }
        }
        Ok(out)
    }

    /// Diagonal, nonzero diagonal, and `X[l+j][l+j] = X[j][j]^-1` for all `j`.
    pub fn is_diagonal_symplectic(&self) -> bool {
        let Ok(ell) = self.ell() else {
            return false;
        };
        if !self.is_diagonal() {
            return false;
        }
        let f = &self.field;
        (0..ell).all(|j| {
            let (d, e) = (&self[(j, j)], &self[(ell + j, ell + j)]);
            !f.is_zero(d) && !f.is_zero(e) && f.entries_close(&[f.mul(d, e)], &[f.one()])
        })
    }
}

/// Read-only `l x l` window into a parent matrix; indices are 0-based
/// within the block.
pub struct BlockView<'a, F: Field> {
    parent: &'a Matrix<F>,
    which: Block,
    ell: usize,
}

impl<F: Field> BlockView<'_, F> {
    pub fn which(&self) -> Block {
        self.which
    }

    pub fn size(&self) -> usize {
        self.ell
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        let (ro, co) = self.which.offsets();
        assert!(i < self.ell && j < self.ell);
        &self.parent[(i + ro * self.ell, j + co * self.ell)]
    }

    /// Copy of the block as a standalone matrix.
    pub fn to_matrix(&self) -> Matrix<F> {
        let rows = (0..self.ell)
            .map(|i| (0..self.ell).map(|j| self.get(i, j).clone()).collect())
            .collect();
        Matrix::from_rows(self.parent.field(), rows).expect("square block")
    }
}

pub struct BlockViewMut<'a, F: Field> {
    parent: &'a mut Matrix<F>,
    which: Block,
    ell: usize,
}

impl<F: Field> BlockViewMut<'_, F> {
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        let (ro, co) = self.which.offsets();
        assert!(i < self.ell && j < self.ell);
        &self.parent[(i + ro * self.ell, j + co * self.ell)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: F::Elem) {
        let (ro, co) = self.which.offsets();
        assert!(i < self.ell && j < self.ell);
        self.parent[(i + ro * self.ell, j + co * self.ell)] = value;
    }
}
