//! Exponential, principal logarithm, polar form and trigonometric functions.
use std::f64::consts::PI;

use cayley_analysis::transcendental::{
    dln_apply, exp, exp_series, ln_principal, polar_decompose, trig, Trig,
};
use cayley_analysis::{parse, AlgebraLevel};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let z = parse("0.3 + 0.8*e2 - 0.4*e5 + 0.1*e7", o).unwrap().constant_value().unwrap();
    let ez = exp(&z);
    println!("exp z = {ez}");
    println!("series(40) agrees to {:.2e}", ez.distance(&exp_series(&z, 40)));
    println!("|exp z| = {:.15}, e^Re z = {:.15}", ez.norm(), z.re().exp());

    let p = polar_decompose(&z);
    println!("polar: rho = {:.6}, theta = {:.6}, direction = {}", p.rho, p.theta, p.direction);
    let l = ln_principal(&z).unwrap();
    println!("ln z = {l}; exp(ln z) - z = {:.2e}", exp(&l).distance(&z));

    let m = p.direction.clone();
    println!("exp(2 pi M) - 1 = {:.2e}", (exp(&m.scale(2.0 * PI)) - parse("1", o).unwrap().constant_value().unwrap()).norm());

    let h = parse("e1 + e3", o).unwrap().constant_value().unwrap();
    println!("dLn(z).h = {}", dln_apply(&z, &h).unwrap());
    for which in [Trig::Cos, Trig::Sin, Trig::Cosh, Trig::Sinh] {
        println!("{which:?}(z) = {}", trig(&z, which));
    }
    // on the negative real axis the direction of the principal log defaults to e1
    let neg = parse("-2", o).unwrap().constant_value().unwrap();
    println!("ln(-2): {:?}", ln_principal(&neg).map(|v| v.to_string()));
}
