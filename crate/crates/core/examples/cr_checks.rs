//! Finite-difference Cauchy-Riemann, harmonicity and z~ checks.
use cayley_analysis::diffcheck::{
    cr_check, harmonic_check, right_superlinear_polynomial, zbar_check, RealFieldSample,
    DEFAULT_THRESHOLD,
};
use cayley_analysis::{parse, AlgebraLevel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let o = AlgebraLevel::OCTONION;
    let z = parse("0.4 - 0.3*e2 + 0.2*e5", o).unwrap().constant_value().unwrap();
    for src in ["e3*z + 1", "z^2", "e2*z^3", "zc", "z*zc", "z + 0.5*zc"] {
        let s = RealFieldSample::from_phrase(&parse(src, o).unwrap());
        let cr = cr_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
        let h = harmonic_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
        let zb = zbar_check(&s, &z, DEFAULT_THRESHOLD).unwrap();
        println!(
            "{src:>11}: cr {:?} ({:.1e})  harmonic {:?} ({:.1e})  zbar {:?} ({:.1e})",
            cr.verdict, cr.max_residual, h.verdict, h.max_residual, zb.verdict, zb.max_residual
        );
    }
    println!("{}", serde_json::to_string(&cr_check(&RealFieldSample::from_phrase(&parse("z^2", o).unwrap()), &z, 1e-4).unwrap()).unwrap());

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for r in 1..=3 {
        let l = AlgebraLevel::new(r).unwrap();
        let p = right_superlinear_polynomial(l, 4, &mut rng);
        println!("r={r}: degree-4 solution of the coefficient system has effective degree {}", p.effective_degree());
    }
}
