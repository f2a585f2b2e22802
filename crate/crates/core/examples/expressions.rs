//! Parsing, evaluation, differentials, primitives and the JSON tree form.
use cayley_analysis::expr::{from_json, to_json, Differential};
use cayley_analysis::{parse, AlgebraLevel};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let f = parse("e1*(z - e2)^-1*e3 + (e4*z^2)*e5 + 3", o).unwrap();
    println!("f = {f}");
    let z = parse("0.5 + 0.25*e6", o).unwrap().constant_value().unwrap();
    let h = parse("e7", o).unwrap().constant_value().unwrap();
    println!("f(z) = {}", f.evaluate(&z).unwrap());
    println!("Df(z).h = {}", f.derivative_apply(&z, &h).unwrap());
    println!("f' (along 1) = {}", f.derivative_one());

    let g = f.primitive().unwrap();
    println!("primitive g = {g}");
    let one = parse("1", o).unwrap().constant_value().unwrap();
    let back = g.derivative_apply(&z, &one).unwrap();
    println!("Dg(z).1 - f(z) = {:.2e}", back.distance(&f.evaluate(&z).unwrap()));

    let mixed = parse("z*zc + e2*zc", o).unwrap();
    println!("D_z (z zc + e2 zc).h = {}", mixed.differential(&z, &h, Differential::Z).unwrap());
    println!("D_zc(z zc + e2 zc).h = {}", mixed.differential(&z, &h, Differential::Zc).unwrap());

    let tree = to_json(&f);
    println!("JSON: {tree}");
    println!("round trip equal: {}", from_json(&tree, o).unwrap() == f);

    match parse("z*e1*z", o).unwrap().primitive() {
        Ok(_) => println!("unexpected primitive"),
        Err(e) => println!("z*e1*z: {e}"),
    }
}
