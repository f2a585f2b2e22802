//! Cauchy's formula, its derivatives, and coefficient extraction.
use cayley_analysis::contour::{cauchy_derivative, cauchy_eval, laurent_coeffs, taylor_coeffs};
use cayley_analysis::integrate::{Path, QuadratureOptions};
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let num = |s: &str| parse(s, o).unwrap().constant_value().unwrap();
    let opts = QuadratureOptions::default();
    let m = num("e3");
    let psi = Path::circle(&CDNumber::zero(o), 1.0, &m, 1.0).unwrap();

    let f = parse("e1*z^3 + e5*z + 2", o).unwrap();
    let z = num("0.2 - 0.3*e3");
    let c = cauchy_eval(&f, &z, &psi, &opts).unwrap();
    println!("Cauchy integral = {}", c.value);
    println!("f(z) M          = {}", &f.evaluate(&z).unwrap() * &m);
    if let Some(v) = &c.recovered {
        println!("recovered f(z)  = {v} (mode {:?})", c.mode);
    }
    let d2 = cauchy_derivative(&f, &z, 2, &psi, &opts).unwrap();
    println!("second derivative times M: {}  vs  {}", d2.value, &(&num("e1") * &z.scale(6.0)) * &m);

    let g = parse("3 - 2*(z - 0.1)^2 + 0.5*(z - 0.1)^4", o).unwrap();
    let a = num("0.1");
    let around = Path::circle(&a, 0.8, &m, 1.0).unwrap();
    let t = taylor_coeffs(&g, &a, 5, &around, &opts).unwrap();
    for (k, ck) in t.coeffs.iter().enumerate() {
        println!("taylor c_{k} = {ck}");
    }

    let h = parse("(z - 0.1)^-2 + 4*(z - 0.1)^-1 + (z - 0.1)", o).unwrap();
    let l = laurent_coeffs(&h, &a, -3, 1, 0.2, 1.0, &m, &opts).unwrap();
    for k in -3..=1 {
        println!("laurent c_{k} = {}", l.get(k).unwrap());
    }
    // a pole inside the annulus is detected
    let bad = parse("(z - 0.1 - 0.5*e3)^-1", o).unwrap();
    println!("pole in annulus: {:?}", laurent_coeffs(&bad, &a, -1, 1, 0.2, 1.0, &m, &opts).map(|_| ()));
}
