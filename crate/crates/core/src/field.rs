//! Field abstraction and the three concrete fields matrices can live over.
//!
//! A [`Field`] is a context object: elements are plain values and every
//! arithmetic operation goes through the field, so a runtime modulus or a
//! float tolerance never has to be stored in each element.
//!
//! Literal grammar accepted by [`Field::parse`]:
//!
//! ```text
//! integer   -?[0-9]+
//! rational  -?[0-9]+/[0-9]+            (nonzero denominator)
//! decimal   -?[0-9]+(.[0-9]+)?([eE]-?[0-9]+)?
//! ```
//!
//! Rationals accept all three forms exactly, prime fields accept integers
//! and rationals (reduced mod p), floats accept all three.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use rand::Rng;
pub use rug::{Integer, Rational};
use regex::Regex;

use crate::error::{Error, Result};

/// Default absolute pivot tolerance for the float field.
pub const DEFAULT_EPS: f64 = 1e-10;
/// Default relative tolerance for float matrix comparisons.
pub const DEFAULT_MATRIX_TOL: f64 = 1e-9;

static INTEGER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^-?[0-9]+$").unwrap());
static RATIONAL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(-?[0-9]+)/([0-9]+)$").unwrap());
static DECIMAL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(-?)([0-9]+)(?:\.([0-9]+))?(?:[eE](-?[0-9]+))?$").unwrap()
});

/// A field `F` together with its element representation.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn config(&self) -> FieldConfig;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse; fails on elements that test as zero.
    fn invert(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.invert(b)?))
    }

    /// Pivot zero test. Exact fields compare with the additive identity,
    /// the float field uses `|a| <= eps`.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// True when arithmetic is exact and matrix equality means entrywise `==`.
    fn is_exact(&self) -> bool;

    /// Size of an element for residual norms. Prime fields report 0 or 1.
    fn magnitude(&self, a: &Self::Elem) -> f64;

    fn parse(&self, text: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;

    /// Uniform nonzero element used for random generator multipliers.
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Matrix-level comparison of two equally sized entry slices.
    fn entries_close(&self, x: &[Self::Elem], y: &[Self::Elem]) -> bool {
        x == y
    }

    /// `dst += alpha * src`, the inner loop of every row operation.
    fn add_scaled(&self, dst: &mut Self::Elem, alpha: &Self::Elem, src: &Self::Elem) {
        *dst = self.add(dst, &self.mul(alpha, src));
    }
}

/// Runtime field selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldConfig {
    Rational,
    PrimeField(u64),
    Float(f64),
}

impl FieldConfig {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldConfig::Rational => Ok(()),
            FieldConfig::PrimeField(p) if is_prime(p) => Ok(()),
            FieldConfig::PrimeField(p) => Err(Error::NotPrime(p)),
            FieldConfig::Float(eps) if eps.is_finite() && eps >= 0.0 => Ok(()),
            FieldConfig::Float(eps) => Err(Error::InvalidTolerance(eps)),
        }
    }
}

impl FromStr for FieldConfig {
    type Err = Error;

    /// Accepts `rational`, `gfp:P`, `float` and `float:EPS`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cfg = match s.split_once(':') {
            None if s == "rational" => FieldConfig::Rational,
            None if s == "float" => FieldConfig::Float(DEFAULT_EPS),
            Some(("gfp", p)) => FieldConfig::PrimeField(
                p.trim()
                    .parse()
                    .map_err(|_| Error::InvalidField(s.to_string()))?,
            ),
            Some(("float", eps)) => FieldConfig::Float(
                eps.trim()
                    .parse()
                    .map_err(|_| Error::InvalidField(s.to_string()))?,
            ),
            _ => return Err(Error::InvalidField(s.to_string())),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Rational => write!(f, "rational"),
            FieldConfig::PrimeField(p) => write!(f, "gfp:{p}"),
            FieldConfig::Float(eps) => write!(f, "float:{eps:e}"),
        }
    }
}

/// Trial division; intended for desk-scale moduli.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn malformed(text: &str) -> Error {
    Error::MalformedScalar(text.to_string())
}

/// Exact value of a decimal literal (with optional exponent).
fn parse_decimal_exact(text: &str) -> Result<Rational> {
    let caps = DECIMAL.captures(text).ok_or_else(|| malformed(text))?;
    let negative = !caps[1].is_empty();
    let int_part = &caps[2];
    let frac_part = caps.get(3).map_or("", |m| m.as_str());
    let exp: i64 = match caps.get(4) {
        Some(m) => m.as_str().parse().map_err(|_| malformed(text))?,
        None => 0,
    };
    let shift = exp - frac_part.len() as i64;
    if shift.unsigned_abs() > 100_000 {
        return Err(malformed(text));
    }
    let digits: Integer = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| malformed(text))?;
    let scale = Integer::from(Integer::u_pow_u(10, shift.unsigned_abs() as u32));
    let mut value = if shift >= 0 {
        Rational::from(digits * scale)
    } else {
        Rational::from((digits, scale))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact rationals over GMP integers, always kept in lowest terms with a
/// positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn config(&self) -> FieldConfig {
        FieldConfig::Rational
    }
    fn zero(&self) -> Rational {
        Rational::new()
    }
    fn one(&self) -> Rational {
        Rational::from(1)
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from(v)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a + b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a - b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        Rational::from(a * b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        Rational::from(-a)
    }
    fn invert(&self, a: &Rational) -> Result<Rational> {
        if *a == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(Rational::from(a.recip_ref()))
        }
    }
    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if *b == 0 {
            Err(Error::ZeroInverse)
        } else {
            Ok(Rational::from(a / b))
        }
    }
    fn is_zero(&self, a: &Rational) -> bool {
        *a == 0
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn magnitude(&self, a: &Rational) -> f64 {
        a.to_f64().abs()
    }
    fn parse(&self, text: &str) -> Result<Rational> {
        let text = text.trim();
        if let Some(caps) = RATIONAL.captures(text) {
            let num: Integer = caps[1].parse().map_err(|_| malformed(text))?;
            let den: Integer = caps[2].parse().map_err(|_| malformed(text))?;
            if den == 0 {
                return Err(Error::ZeroDenominator(text.to_string()));
            }
            return Ok(Rational::from((num, den)));
        }
        parse_decimal_exact(text)
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        let pick = |rng: &mut R| loop {
            let v: i64 = rng.gen_range(-9..=9);
            if v != 0 {
                break v;
            }
        };
        let num = pick(rng);
        let den = pick(rng);
        Rational::from((num, den))
    }
    fn add_scaled(&self, dst: &mut Rational, alpha: &Rational, src: &Rational) {
        if *src != 0 {
            *dst += Rational::from(alpha * src);
        }
    }
}

/// The prime field GF(p), elements stored as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(&self, v: &Integer) -> u64 {
        use rug::ops::RemRounding;
        v.clone()
            .rem_euc(Integer::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn config(&self) -> FieldConfig {
        FieldConfig::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn invert(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            Err(Error::ZeroInverse)
        } else {
            // Fermat: a^(p-2) = a^-1.
            Ok(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn magnitude(&self, a: &u64) -> f64 {
        if *a == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn parse(&self, text: &str) -> Result<u64> {
        let text = text.trim();
        if INTEGER.is_match(text) {
            let v: Integer = text.parse().map_err(|_| malformed(text))?;
            return Ok(self.reduce(&v));
        }
        if let Some(caps) = RATIONAL.captures(text) {
            let num: Integer = caps[1].parse().map_err(|_| malformed(text))?;
            let den: Integer = caps[2].parse().map_err(|_| malformed(text))?;
            let den = self.reduce(&den);
            if den == 0 {
                return Err(Error::ZeroDenominator(text.to_string()));
            }
            return self.div(&self.reduce(&num), &den);
        }
        Err(malformed(text))
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

/// Double precision floats with an absolute pivot tolerance and a relative
/// matrix comparison tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reals {
    eps: f64,
    matrix_tol: f64,
}

impl Default for Reals {
    fn default() -> Self {
        Reals {
            eps: DEFAULT_EPS,
            matrix_tol: DEFAULT_MATRIX_TOL,
        }
    }
}

impl Reals {
    pub fn new(eps: f64) -> Result<Self> {
        FieldConfig::Float(eps).validate()?;
        Ok(Reals {
            eps,
            ..Reals::default()
        })
    }

    pub fn with_matrix_tol(mut self, tol: f64) -> Self {
        self.matrix_tol = tol;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn matrix_tol(&self) -> f64 {
        self.matrix_tol
    }
}

impl Field for Reals {
    type Elem = f64;

    fn config(&self) -> FieldConfig {
        FieldConfig::Float(self.eps)
    }
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn from_i64(&self, v: i64) -> f64 {
        v as f64
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn invert(&self, a: &f64) -> Result<f64> {
        if self.is_zero(a) {
            Err(Error::ZeroInverse)
        } else {
            Ok(1.0 / a)
        }
    }
    fn div(&self, a: &f64, b: &f64) -> Result<f64> {
        if self.is_zero(b) {
            Err(Error::ZeroInverse)
        } else {
            Ok(a / b)
        }
    }
    fn is_zero(&self, a: &f64) -> bool {
        a.abs() <= self.eps
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn magnitude(&self, a: &f64) -> f64 {
        a.abs()
    }
    fn parse(&self, text: &str) -> Result<f64> {
        let text = text.trim();
        if let Some(caps) = RATIONAL.captures(text) {
            let num: f64 = caps[1].parse().map_err(|_| malformed(text))?;
            let den: f64 = caps[2].parse().map_err(|_| malformed(text))?;
            if den == 0.0 {
                return Err(Error::ZeroDenominator(text.to_string()));
            }
            return Ok(num / den);
        }
        if DECIMAL.is_match(text) {
            return text.parse().map_err(|_| malformed(text));
        }
        Err(malformed(text))
    }
    fn format(&self, a: &f64) -> String {
        // Display is shortest round-trip; avoid printing "-0".
        if *a == 0.0 {
            "0".to_string()
        } else {
            a.to_string()
        }
    }
    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let v: f64 = rng.gen_range(-2.0..=2.0);
            if v.abs() >= 1e-3 {
                break v;
            }
        }
    }
    fn entries_close(&self, x: &[f64], y: &[f64]) -> bool {
        if x.len() != y.len() {
            return false;
        }
        let diff = x
            .iter()
            .zip(y)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let scale = y.iter().fold(0.0f64, |m, b| m.max(b.abs()));
        diff <= self.matrix_tol * (1.0 + scale)
    }
    fn add_scaled(&self, dst: &mut f64, alpha: &f64, src: &f64) {
        *dst += alpha * src;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_literals_normalize() {
        let f = Rationals;
        assert_eq!(f.parse("3/6").unwrap(), q(1, 2));
        assert_eq!(f.parse("-4/8").unwrap(), q(-1, 2));
        assert_eq!(f.parse("12").unwrap(), q(12, 1));
        assert_eq!(f.parse("0.25").unwrap(), q(1, 4));
        assert_eq!(f.parse("-1.5e2").unwrap(), q(-150, 1));
        assert_eq!(f.parse("5e-1").unwrap(), q(1, 2));
        assert_eq!(f.parse("1/0"), Err(Error::ZeroDenominator("1/0".into())));
        assert!(matches!(f.parse("1/2/3"), Err(Error::MalformedScalar(_))));
        assert!(matches!(f.parse("abc"), Err(Error::MalformedScalar(_))));
        assert!(matches!(f.parse(""), Err(Error::MalformedScalar(_))));
    }

    #[test]
    fn prime_literals_reduce() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.parse("7").unwrap(), 2);
        assert_eq!(f.parse("-1").unwrap(), 4);
        assert_eq!(f.parse("1/2").unwrap(), 3);
        assert_eq!(f.parse("123456789012345678901234567890").unwrap(), 0);
        assert!(matches!(f.parse("2/5"), Err(Error::ZeroDenominator(_))));
        assert!(matches!(f.parse("0.5"), Err(Error::MalformedScalar(_))));
    }

    #[test]
    fn float_literals() {
        let f = Reals::default();
        assert_eq!(f.parse("-2.5e-1").unwrap(), -0.25);
        assert_eq!(f.parse("1/4").unwrap(), 0.25);
        assert!(f.parse("inf").is_err());
        assert!(f.parse("+1").is_err());
        assert_eq!(f.format(&-0.0), "0");
    }

    #[test]
    fn inversion() {
        assert_eq!(Rationals.invert(&q(2, 1)).unwrap(), q(1, 2));
        assert_eq!(PrimeField::new(7).unwrap().invert(&3).unwrap(), 5);
        assert_eq!(Rationals.invert(&q(0, 1)), Err(Error::ZeroInverse));
        assert_eq!(PrimeField::new(7).unwrap().invert(&0), Err(Error::ZeroInverse));
        assert_eq!(Reals::default().invert(&1e-12), Err(Error::ZeroInverse));
    }

    #[test]
    fn zero_tests() {
        assert!(Rationals.is_zero(&q(0, 1)));
        assert!(!Rationals.is_zero(&q(1, 3)));
        let f = Reals::new(1e-12).unwrap();
        assert!(f.is_zero(&1e-14));
        assert!(!f.is_zero(&1e-11));
    }

    #[test]
    fn prime_field_multiplicative_group_is_closed() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in 1..p {
                let inv = f.invert(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), 1, "p={p} a={a}");
                for b in 1..p {
                    assert_ne!(f.mul(&a, &b), 0, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn field_config_parsing() {
        assert_eq!("rational".parse::<FieldConfig>().unwrap(), FieldConfig::Rational);
        assert_eq!("gfp:7".parse::<FieldConfig>().unwrap(), FieldConfig::PrimeField(7));
        assert_eq!("float".parse::<FieldConfig>().unwrap(), FieldConfig::Float(DEFAULT_EPS));
        assert_eq!("float:1e-6".parse::<FieldConfig>().unwrap(), FieldConfig::Float(1e-6));
        assert_eq!("gfp:9".parse::<FieldConfig>(), Err(Error::NotPrime(9)));
        assert!("float:-1".parse::<FieldConfig>().is_err());
        assert!("complex".parse::<FieldConfig>().is_err());
        for cfg in [FieldConfig::Rational, FieldConfig::PrimeField(13), FieldConfig::Float(1e-7)] {
            assert_eq!(cfg.to_string().parse::<FieldConfig>().unwrap(), cfg);
        }
    }

    #[test]
    fn trial_division() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    proptest! {
        #[test]
        fn rational_division_round_trips(an in -50i64..50, ad in 1i64..50, bn in 1i64..50, bd in -50i64..50) {
            prop_assume!(bd != 0);
            let f = Rationals;
            let a = q(an, ad);
            let b = q(bn, bd);
            prop_assert_eq!(f.mul(&f.div(&a, &b).unwrap(), &b), a.clone());
            prop_assert!(*a.denom() > 0);
            prop_assert_eq!(f.add(&f.add(&a, &b), &a), f.add(&a, &f.add(&b, &a)));
        }

        #[test]
        fn rational_format_round_trips(n in -1000i64..1000, d in 1i64..1000) {
            let v = q(n, d);
            prop_assert_eq!(Rationals.parse(&Rationals.format(&v)).unwrap(), v);
        }

        #[test]
        fn float_zero_test_is_monotone(x in -1e-6f64..1e-6, e1 in 0.0f64..1e-6, extra in 0.0f64..1e-6) {
            let lo = Reals::new(e1).unwrap();
            let hi = Reals::new(e1 + extra).unwrap();
            prop_assert!(!lo.is_zero(&x) || hi.is_zero(&x));
        }

        #[test]
        fn float_format_round_trips(x in -1e6f64..1e6) {
            let f = Reals::default();
            prop_assert_eq!(f.parse(&f.format(&x)).unwrap(), x);
        }
    }
}
