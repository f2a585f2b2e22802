use cayley_analysis::diffcheck::{
    cr_check, harmonic_check, right_superlinear_polynomial, zbar_check, RealFieldSample,
    DEFAULT_THRESHOLD,
};
use cayley_analysis::{parse, AlgebraLevel, CDNumber, Phrase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_maps_pass_cr_and_harmonic(r in 1u32..=3, seed in any::<u64>(), degree in 1usize..=4) {
        let l = AlgebraLevel::new(r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = right_superlinear_polynomial(l, degree, &mut rng);
        let z = CDNumber::random(l, &mut rng);
        let s = p.sample();
        prop_assert!(cr_check(&s, &z, DEFAULT_THRESHOLD).unwrap().passed());
        prop_assert!(harmonic_check(&s, &z, 10.0 * DEFAULT_THRESHOLD).unwrap().passed());
    }

    #[test]
    fn pure_z_phrases_pass_zbar(r in 2u32..=3, seed in any::<u64>()) {
        let l = AlgebraLevel::new(r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = Phrase::zero(l);
        for k in -1..=3 {
            let c = CDNumber::random(l, &mut rng).scale(3.0);
            let w = Phrase::var(cayley_analysis::expr::Var::Z, &c, k)
                .left_mul(&CDNumber::random(l, &mut rng)).unwrap()
                .right_mul(&CDNumber::random(l, &mut rng)).unwrap();
            f = f.add(&w).unwrap();
        }
        let z = CDNumber::random(l, &mut rng);
        prop_assume!(f.evaluate(&z).is_ok());
        prop_assert!(zbar_check(&RealFieldSample::from_phrase(&f), &z, DEFAULT_THRESHOLD).unwrap().passed());
    }

    #[test]
    fn conjugate_fails_everything_it_should(r in 1u32..=4, seed in any::<u64>()) {
        let l = AlgebraLevel::new(r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = CDNumber::random(l, &mut rng);
        let s = RealFieldSample::from_phrase(&parse("zc", l).unwrap());
        let cr = cr_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
        prop_assert!((cr.max_residual - 2.0).abs() < 1e-6);
        let zb = zbar_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
        prop_assert!(zb.per_plane.iter().all(|p| (p.1 - 1.0).abs() < 1e-6));
    }
}

#[test]
fn only_affine_maps_are_right_superlinear_beyond_complex() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for r in 2..=3 {
        let l = AlgebraLevel::new(r).unwrap();
        for _ in 0..5 {
            assert_eq!(right_superlinear_polynomial(l, 4, &mut rng).effective_degree(), 1);
        }
    }
    let c = AlgebraLevel::COMPLEX;
    assert_eq!(right_superlinear_polynomial(c, 4, &mut rng).effective_degree(), 4);
}

#[test]
fn square_fails_cr_off_the_real_axis() {
    let l = AlgebraLevel::OCTONION;
    let s = RealFieldSample::from_phrase(&parse("z^2", l).unwrap());
    assert!(cr_check(&s, &CDNumber::real(l, -1.3), DEFAULT_THRESHOLD).unwrap().passed());
    let z = parse("0.2 + 0.5*e3 - 0.1*e6", l).unwrap().constant_value().unwrap();
    let rep = cr_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
    assert!(!rep.passed());
    // plane e3 sees only the e6 part of Im z, and vice versa
    assert!((rep.residual("e3").unwrap() - 0.2).abs() < 1e-6);
    assert!((rep.residual("e6").unwrap() - 1.0).abs() < 1e-6);
}
