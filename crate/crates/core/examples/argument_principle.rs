//! Counting zeros through the index of the image curve.
use cayley_analysis::contour::argument_principle;
use cayley_analysis::integrate::Path;
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    let h = AlgebraLevel::QUATERNION;
    let m = parse("0.6*e1 + 0.8*e3", h).unwrap().constant_value().unwrap();
    let gamma = Path::circle(&CDNumber::zero(h), 1.0, &m, 1.0).unwrap();
    for n in 1..=3 {
        let f = parse(&format!("z^{n}"), h).unwrap();
        let rep = argument_principle(&f, &gamma, &[(CDNumber::zero(h), n)], 1e-8).unwrap();
        println!("z^{n}: index of image = {}, divisor sum = {}, diff {:.1e}", rep.lhs, rep.rhs, rep.diff);
    }
    // two zeros in the disc of the plane, one outside
    let f = parse("(z - 0.5)*(z + 0.3*e1)*(z - 2)", h).unwrap();
    let e1 = CDNumber::basis(h, 1).unwrap();
    let plane = Path::circle(&CDNumber::zero(h), 1.0, &e1, 1.0).unwrap();
    let zeros = [
        (parse("0.5", h).unwrap().constant_value().unwrap(), 1),
        (parse("-0.3*e1", h).unwrap().constant_value().unwrap(), 1),
        (parse("2", h).unwrap().constant_value().unwrap(), 1),
    ];
    let rep = argument_principle(&f, &plane, &zeros, 1e-8).unwrap();
    println!("cubic: lhs {} rhs {}", rep.lhs, rep.rhs);
}
