use std::f64::consts::PI;

use cayley_analysis::contour::{argument_principle, ar_index, find_root, residue, RootOptions};
use cayley_analysis::integrate::{line_integral, Path, QuadratureOptions};
use cayley_analysis::{AlgebraLevel, CDNumber, Phrase};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn level() -> impl Strategy<Value = AlgebraLevel> {
    (2u32..=4).prop_map(|r| AlgebraLevel::new(r).unwrap())
}

fn sandwich(l: AlgebraLevel, rng: &mut ChaCha8Rng, degree: i32) -> Phrase {
    let mut f = Phrase::zero(l);
    for k in 0..=degree {
        let w = Phrase::z_pow(l, k)
            .left_mul(&CDNumber::random(l, rng))
            .unwrap()
            .right_mul(&CDNumber::random(l, rng))
            .unwrap();
        f = f.add(&w).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_integrals_of_polynomials_vanish(l in level(), seed in any::<u64>(), degree in 0i32..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sandwich(l, &mut rng, degree);
        let c = CDNumber::random(l, &mut rng);
        let m = CDNumber::random_unit_imaginary(l, &mut rng);
        let opts = QuadratureOptions::with_tol(1e-9);
        for p in [Path::circle(&c, 0.8, &m, 1.0).unwrap(), Path::square(&c, 0.7, &m).unwrap()] {
            let v = line_integral(&f, &p, &opts).unwrap();
            prop_assert!(v.value.norm() < 1e-6, "{}", v.value);
        }
    }

    #[test]
    fn open_integrals_match_primitive(l in level(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = sandwich(l, &mut rng, 3);
        let pts: Vec<CDNumber> = (0..4).map(|_| CDNumber::random(l, &mut rng)).collect();
        let path = Path::polyline(pts.clone()).unwrap();
        let g = f.primitive().unwrap();
        let want = g.evaluate(&pts[3]).unwrap() - g.evaluate(&pts[0]).unwrap();
        let got = line_integral(&f, &path, &QuadratureOptions::with_tol(1e-9)).unwrap();
        prop_assert!(got.value.distance(&want) < 1e-6 * (1.0 + want.norm()));
        let back = line_integral(&f, &path.reversed(), &QuadratureOptions::with_tol(1e-9)).unwrap();
        prop_assert!((&back.value + &got.value).norm() < 1e-6 * (1.0 + want.norm()));
    }

    #[test]
    fn loop_integral_of_inverse(l in level(), seed in any::<u64>(), n in 1i32..=3, rho in 0.3f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = CDNumber::random_unit_imaginary(l, &mut rng);
        let p = Path::circle(&CDNumber::zero(l), rho, &m, n as f64).unwrap();
        let v = line_integral(&Phrase::z_pow(l, -1), &p, &QuadratureOptions::with_tol(1e-7)).unwrap();
        prop_assert!(v.value.distance(&m.scale(2.0 * PI * n as f64)) < 1e-5);
        let idx = ar_index(&CDNumber::zero(l), &p, 1e-7).unwrap();
        prop_assert!(idx.value.distance(&m.scale(n as f64)) < 1e-6);
    }

    #[test]
    fn sandwich_residue(seed in any::<u64>()) {
        let l = AlgebraLevel::OCTONION;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (b, c, p) = (CDNumber::random(l, &mut rng), CDNumber::random(l, &mut rng), CDNumber::random(l, &mut rng));
        let m = CDNumber::random_unit_imaginary(l, &mut rng);
        let f = Phrase::var(cayley_analysis::expr::Var::Z, &p, -1).left_mul(&b).unwrap().right_mul(&c).unwrap();
        let r = residue(&f, &p, &m, 0.4, &QuadratureOptions::with_tol(1e-8)).unwrap();
        prop_assert!(r.value.distance(&(&(&b * &m) * &c)) < 1e-5);
    }

    #[test]
    fn index_of_powers(l in level(), seed in any::<u64>(), n in 1i32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = CDNumber::random_unit_imaginary(l, &mut rng);
        let gamma = Path::circle(&CDNumber::zero(l), 1.0, &m, 1.0).unwrap();
        let rep = argument_principle(&Phrase::z_pow(l, n), &gamma, &[(CDNumber::zero(l), n)], 1e-7).unwrap();
        prop_assert!(rep.lhs.distance(&m.scale(n as f64)) < 1e-4);
        prop_assert!(rep.diff < 1e-4);
    }

    #[test]
    fn monic_cubics_have_roots(r in 2u32..=3, seed in any::<u64>()) {
        let l = AlgebraLevel::new(r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Phrase::z_pow(l, 3);
        for k in 0..3 {
            p = p.add(&Phrase::z_pow(l, k).left_mul(&CDNumber::random(l, &mut rng)).unwrap()).unwrap();
        }
        let res = find_root(&p, &CDNumber::zero(l), &RootOptions::default()).unwrap();
        prop_assert!(p.evaluate(&res.root).unwrap().norm() <= 1e-8);
    }
}
