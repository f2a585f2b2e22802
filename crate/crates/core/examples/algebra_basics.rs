//! Multiplication across the Cayley-Dickson tower: the quaternion rule
//! `e1 e2 = e3`, octonion norms, and what breaks at the sedenions.
use cayley_analysis::algebra::{find_alternativity_violation, find_zero_divisor};
use cayley_analysis::{parse, AlgebraLevel, BasisTable, CDNumber};

fn main() {
    let h = AlgebraLevel::QUATERNION;
    let e = |k| CDNumber::basis(h, k).unwrap();
    println!("quaternions: e1 e2 = {}, e2 e1 = {}", &e(1) * &e(2), &e(2) * &e(1));

    let table = BasisTable::get(AlgebraLevel::OCTONION);
    println!("octonion table row for e1:");
    for b in 0..8 {
        let (sign, idx) = table.product(1, b);
        print!("  e1 e{b} = {}e{idx}", if sign < 0 { "-" } else { "" });
    }
    println!();

    let o = AlgebraLevel::OCTONION;
    let a = parse("1 + 2*e3 - e5", o).unwrap().constant_value().unwrap();
    let b = parse("0.5*e1 + e6 + e7", o).unwrap().constant_value().unwrap();
    println!("|ab| = {:.12}, |a||b| = {:.12}", (&a * &b).norm(), a.norm() * b.norm());
    println!("(ab)* - b*a* = {:.2e}", (&a * &b).conj().distance(&(&b.conj() * &a.conj())));
    println!("a^-1 = {}", a.inverse().unwrap());
    println!("a^3 a^-2 - a = {:.2e}", (&a.powi(3).unwrap() * &a.powi(-2).unwrap()).distance(&a));

    let s = AlgebraLevel::SEDENION;
    println!("zero divisors at r=3: {:?}", find_zero_divisor(o, 1 << 20).is_some());
    if let Some((x, y)) = find_zero_divisor(s, 1 << 20) {
        println!("sedenion zero divisors: ({x}) ({y}) with product norm {}", (&x * &y).norm());
    }
    if let Some((x, y, res)) = find_alternativity_violation(s, 0.1, 1 << 20) {
        println!("(xx)y != x(xy) for x = {x}, y = {y}: residual {res}");
    }
}
