use proptest::prelude::*;
use symplectic::{
    conjugate_by_symplectic, conjugate_by_transcript, eliminate, random_symplectic, st_decompose, Block, Field,
    Matrix, PrimeField, Rational, Rationals, StMode,
};

/// Characteristic polynomial coefficients, lowest degree first, by
/// Faddeev-LeVerrier (fine over Q).
fn char_poly(a: &Matrix<Rationals>) -> Vec<Rational> {
    let f = Rationals;
    let n = a.order();
    let mut coeffs = vec![f.zero(); n + 1];
    coeffs[n] = f.one();
    let mut m = Matrix::zeros(&f, n);
    for k in 1..=n {
        let mut next = a.mul(&m).unwrap();
        for d in 0..n {
            next[(d, d)] = f.add(&next[(d, d)], &coeffs[n - k + 1]);
        }
        m = next;
        let tr = a.mul(&m).unwrap().trace();
        coeffs[n - k] = f.div(&f.neg(&tr), &f.from_i64(k as i64)).unwrap();
    }
    coeffs
}

fn int_matrix(entries: &[i64]) -> Matrix<Rationals> {
    let n = (entries.len() as f64).sqrt() as usize;
    let rows = entries
        .chunks(n)
        .map(|r| r.iter().map(|&v| Rationals.from_i64(v)).collect())
        .collect();
    Matrix::from_rows(&Rationals, rows).unwrap()
}

fn square_entries(max_ell: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_ell).prop_flat_map(|ell| proptest::collection::vec(-9i64..=9, 4 * ell * ell))
}

#[test]
fn char_poly_of_known_matrix() {
    // x^2 - 5x - 2
    let m = int_matrix(&[1, 2, 3, 4]);
    let expected: Vec<Rational> = [-2, -5, 1].iter().map(|&v| Rational::from(v)).collect();
    assert_eq!(char_poly(&m), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_preserves_characteristic_polynomial(
        entries in square_entries(3),
        seed in any::<u64>(),
        k in 0usize..30,
    ) {
        let m = int_matrix(&entries);
        let ell = m.order() / 2;
        let s = random_symplectic(&Rationals, ell, k, seed);
        let c = conjugate_by_symplectic(&m, &s).unwrap();
        prop_assert_eq!(char_poly(&c), char_poly(&m));
    }

    #[test]
    fn symplectic_blocks_satisfy_identities(ell in 1usize..5, seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5, 7, 13])) {
        let f = PrimeField::new(p).unwrap();
        let g = random_symplectic(&f, ell, 6 * ell * ell, seed);
        let blk = |b| g.block(b).unwrap().to_matrix();
        let (a, b, c, d) = (blk(Block::A), blk(Block::B), blk(Block::C), blk(Block::D));
        let tmul = |x: &Matrix<PrimeField>, y: &Matrix<PrimeField>| x.transpose().mul(y).unwrap();
        prop_assert_eq!(tmul(&a, &c), tmul(&c, &a));
        prop_assert_eq!(tmul(&d, &b), tmul(&b, &d));
        prop_assert_eq!(tmul(&a, &d).sub(&tmul(&c, &b)).unwrap(), Matrix::identity(&f, ell));
    }

    #[test]
    fn transcript_inverse_rebuilds_input(ell in 1usize..5, seed in any::<u64>()) {
        let g = random_symplectic(&Rationals, ell, 4 * ell * ell, seed);
        let r = eliminate(&g).unwrap();
        let rebuilt = r.transcript.inverse_product(&Rationals).mul(&r.diagonal).unwrap();
        prop_assert_eq!(rebuilt, g);
        prop_assert!(r.transcript.len() <= 4 * ell * ell + 4 * ell);
    }

    #[test]
    fn conjugation_by_transcript_matches_dense(entries in square_entries(3), seed in any::<u64>()) {
        let m = int_matrix(&entries);
        let ell = m.order() / 2;
        let s = random_symplectic(&Rationals, ell, 3 * ell * ell, seed);
        let r = eliminate(&s).unwrap();
        let fast = conjugate_by_transcript(&m, &r.transcript, &r.diagonal).unwrap();
        let dense = s.inverse().unwrap().mul(&m).unwrap().mul(&s).unwrap();
        prop_assert_eq!(fast, dense);
    }

    #[test]
    fn permissive_st_never_fails_on_nonsingular(entries in square_entries(3)) {
        let m = int_matrix(&entries);
        prop_assume!(!Rationals.is_zero(&m.determinant()));
        let r = st_decompose(&m, StMode::Permissive).unwrap();
        let (s, t) = r.factors().unwrap();
        prop_assert!(s.is_symplectic());
        prop_assert_eq!(s.mul(t).unwrap(), m.clone());
        prop_assert_eq!(t.unreduced_columns().unwrap(), r.unreduced_columns.clone());

        let strict = st_decompose(&m, StMode::Strict).unwrap();
        prop_assert_eq!(strict.is_success(), r.unreduced_columns.is_empty());
        prop_assert_eq!(st_decompose(&m, StMode::Strict).unwrap(), strict);
    }

    #[test]
    fn st_on_symplectic_input_is_elimination(ell in 1usize..5, seed in any::<u64>()) {
        let f = PrimeField::new(11).unwrap();
        let g = random_symplectic(&f, ell, 5 * ell * ell, seed);
        let r = st_decompose(&g, StMode::Strict).unwrap();
        let (_, t) = r.factors().unwrap();
        prop_assert_eq!(t, &eliminate(&g).unwrap().diagonal);
    }
}
