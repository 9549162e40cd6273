//! Elementary symplectic generators and their action as row (or column)
//! operations.
//!
//! With `R` an `l x l` matrix:
//!
//! * `E(i, j, a) = blockdiag(R, R^-T)` with `R = I + a e_ij`, `i != j`
//! * `F(i, j, a) = [[I, R], [0, I]]`
//! * `H(i, j, a) = [[I, 0], [R, I]]`
//!
//! where for `F` and `H` the matrix `R` is `a (e_ij + e_ji)` when `i < j` and
//! `a e_ii` when `i = j`. Indices are 1-based.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    E,
    F,
    H,
}

impl GeneratorKind {
    pub fn letter(self) -> char {
        match self {
            GeneratorKind::E => 'E',
            GeneratorKind::F => 'F',
            GeneratorKind::H => 'H',
        }
    }
}

/// One elementary symplectic matrix of order `2l`.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<F: Field> {
    kind: GeneratorKind,
    ell: usize,
    i: usize,
    j: usize,
    alpha: F::Elem,
}

impl<F: Field> Generator<F> {
    /// Validates indices and rejects a zero multiplier. `F` and `H` indices
    /// are normalized to `i <= j`.
    pub fn new(
        field: &F,
        kind: GeneratorKind,
        ell: usize,
        i: usize,
        j: usize,
        alpha: F::Elem,
    ) -> Result<Self> {
        for idx in [i, j] {
            if !(1..=ell).contains(&idx) {
                return Err(Error::IndexOutOfRange { index: idx, max: ell });
            }
        }
        if alpha == field.zero() {
            return Err(Error::ZeroMultiplier);
        }
        let (i, j) = match kind {
            GeneratorKind::E if i == j => return Err(Error::DiagonalTransvection(i)),
            GeneratorKind::E => (i, j),
            GeneratorKind::F | GeneratorKind::H => (i.min(j), i.max(j)),
        };
        Ok(Generator {
            kind,
            ell,
            i,
            j,
            alpha,
        })
    }

    pub fn e(field: &F, ell: usize, i: usize, j: usize, alpha: F::Elem) -> Result<Self> {
        Self::new(field, GeneratorKind::E, ell, i, j, alpha)
    }

    pub fn f(field: &F, ell: usize, i: usize, j: usize, alpha: F::Elem) -> Result<Self> {
        Self::new(field, GeneratorKind::F, ell, i, j, alpha)
    }

    pub fn h(field: &F, ell: usize, i: usize, j: usize, alpha: F::Elem) -> Result<Self> {
        Self::new(field, GeneratorKind::H, ell, i, j, alpha)
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn alpha(&self) -> &F::Elem {
        &self.alpha
    }

    /// Same kind and indices with the multiplier negated.
    pub fn inverse(&self, field: &F) -> Self {
        Generator {
            alpha: field.neg(&self.alpha),
            ..self.clone()
        }
    }

    /// Dense `2l x 2l` matrix of this generator.
    pub fn materialize(&self, field: &F) -> Matrix<F> {
        let ell = self.ell;
        let mut m = Matrix::identity(field, 2 * ell);
        let (a, b) = (self.i - 1, self.j - 1);
        match self.kind {
            GeneratorKind::E => {
                m[(a, b)] = self.alpha.clone();
                m[(ell + b, ell + a)] = field.neg(&self.alpha);
            }
            GeneratorKind::F => {
                m[(a, ell + b)] = self.alpha.clone();
                m[(b, ell + a)] = self.alpha.clone();
            }
            GeneratorKind::H => {
                m[(ell + a, b)] = self.alpha.clone();
                m[(ell + b, a)] = self.alpha.clone();
            }
        }
        m
    }

    fn check_order(&self, g: &Matrix<F>) -> Result<()> {
        if g.order() == 2 * self.ell {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: 2 * self.ell,
                found: g.order(),
            })
        }
    }

    /// `G <- g G`, as one or two row operations.
    pub fn apply_left(&self, g: &mut Matrix<F>) -> Result<()> {
        self.check_order(g)?;
        let ell = self.ell;
        let (a, b) = (self.i - 1, self.j - 1);
        let alpha = &self.alpha;
        match self.kind {
            GeneratorKind::E => {
                g.add_scaled_row(a, b, alpha);
                let neg = g.field().neg(alpha);
                g.add_scaled_row(ell + b, ell + a, &neg);
            }
            GeneratorKind::F => {
                g.add_scaled_row(a, ell + b, alpha);
                if a != b {
                    g.add_scaled_row(b, ell + a, alpha);
                }
            }
            GeneratorKind::H => {
                g.add_scaled_row(ell + a, b, alpha);
                if a != b {
                    g.add_scaled_row(ell + b, a, alpha);
                }
            }
        }
        Ok(())
    }

    /// `G <- G g`, as one or two column operations.
    pub fn apply_right(&self, g: &mut Matrix<F>) -> Result<()> {
        self.check_order(g)?;
        let ell = self.ell;
        let (a, b) = (self.i - 1, self.j - 1);
        let alpha = &self.alpha;
        match self.kind {
            GeneratorKind::E => {
                g.add_scaled_col(b, a, alpha);
                let neg = g.field().neg(alpha);
                g.add_scaled_col(ell + a, ell + b, &neg);
            }
            GeneratorKind::F => {
                g.add_scaled_col(ell + b, a, alpha);
                if a != b {
                    g.add_scaled_col(ell + a, b, alpha);
                }
            }
            GeneratorKind::H => {
                g.add_scaled_col(b, ell + a, alpha);
                if a != b {
                    g.add_scaled_col(a, ell + b, alpha);
                }
            }
        }
        Ok(())
    }
}

/// Generators in application order: the first step multiplies the input
/// first, so the represented product is `steps[k-1] ... steps[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript<F: Field> {
    ell: usize,
    steps: Vec<Generator<F>>,
}

impl<F: Field> Transcript<F> {
    pub fn new(ell: usize) -> Self {
        Transcript {
            ell,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(ell: usize, steps: Vec<Generator<F>>) -> Result<Self> {
        if let Some(bad) = steps.iter().find(|g| g.ell != ell) {
            return Err(Error::DimensionMismatch {
                expected: 2 * ell,
                found: 2 * bad.ell,
            });
        }
        Ok(Transcript { ell, steps })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn steps(&self) -> &[Generator<F>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, g: Generator<F>) {
        debug_assert_eq!(g.ell, self.ell);
        self.steps.push(g);
    }

    pub fn extend(&mut self, other: &Transcript<F>) {
        self.steps.extend(other.steps.iter().cloned());
    }

    /// Applies every step from the left, in order.
    pub fn apply_left(&self, g: &mut Matrix<F>) -> Result<()> {
        self.steps.iter().try_for_each(|s| s.apply_left(g))
    }

    /// Dense product `steps[k-1] ... steps[0]`.
    pub fn product(&self, field: &F) -> Matrix<F> {
        let mut m = Matrix::identity(field, 2 * self.ell);
        self.apply_left(&mut m).expect("orders agree");
        m
    }

    /// Inverse of [`Transcript::product`]: inverted steps applied in reverse
    /// order to the identity.
    pub fn inverse_product(&self, field: &F) -> Matrix<F> {
        let mut m = Matrix::identity(field, 2 * self.ell);
        for step in self.steps.iter().rev() {
            step.inverse(field).apply_left(&mut m).expect("orders agree");
        }
        m
    }
}

/// `[F(i,i,1), H(i,i,-1), F(i,i,1)]`: maps `row_i <- row_{l+i}` and
/// `row_{l+i} <- -row_i`.
pub fn row_exchange_sequence<F: Field>(field: &F, ell: usize, i: usize) -> Result<Transcript<F>> {
    let one = field.one();
    let minus_one = field.neg(&one);
    Transcript::from_steps(
        ell,
        vec![
            Generator::f(field, ell, i, i, one.clone())?,
            Generator::h(field, ell, i, i, minus_one)?,
            Generator::f(field, ell, i, i, one)?,
        ],
    )
}

/// Uniformly chosen kind and index pair with a random nonzero multiplier.
pub fn random_generator<F: Field, R: Rng + ?Sized>(field: &F, ell: usize, rng: &mut R) -> Generator<F> {
    let kinds: &[GeneratorKind] = if ell >= 2 {
        &[GeneratorKind::E, GeneratorKind::F, GeneratorKind::H]
    } else {
        &[GeneratorKind::F, GeneratorKind::H]
    };
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let (i, j) = match kind {
        GeneratorKind::E => {
            let i = rng.gen_range(1..=ell);
            let mut j = rng.gen_range(1..ell);
            if j >= i {
                j += 1;
            }
            (i, j)
        }
        _ => {
            // k-th pair of the upper triangle, row by row
            let mut k = rng.gen_range(0..ell * (ell + 1) / 2);
            let mut i = 1;
            while k > ell - i {
                k -= ell - i + 1;
                i += 1;
            }
            (i, i + k)
        }
    };
    Generator::new(field, kind, ell, i, j, field.random_nonzero(rng)).expect("valid random generator")
}

/// Product of `k` random generators, deterministic in `seed`.
pub fn random_symplectic<F: Field>(field: &F, ell: usize, k: usize, seed: u64) -> Matrix<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::identity(field, 2 * ell);
    for _ in 0..k {
        random_generator(field, ell, &mut rng)
            .apply_left(&mut m)
            .expect("orders agree");
    }
    m
}
