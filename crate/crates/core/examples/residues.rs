//! Residues as functionals of the circle direction, the residue theorem and
//! the sum over all residues including infinity.
use cayley_analysis::contour::{residue, residue_theorem_check, sum_residues_check, ResidueFunctional};
use cayley_analysis::integrate::{Path, QuadratureOptions};
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let num = |s: &str| parse(s, o).unwrap().constant_value().unwrap();
    let opts = QuadratureOptions::with_tol(1e-8);
    let (b, c, p) = (num("1 + e2"), num("e4 - e7"), num("0.3*e1"));
    let f = parse("((1 + e2)*(z - 0.3*e1)^-1)*(e4 - e7)", o).unwrap();
    for m in ["e1", "e3", "e6"] {
        let m = num(m);
        let r = residue(&f, &p, &m, 0.5, &opts).unwrap();
        println!("res(M = {m}) = {}   (bM)c = {}", r.value, &(&b * &m) * &c);
    }
    let probes: Vec<CDNumber> = (1..8).map(|k| CDNumber::basis(o, k).unwrap()).collect();
    let func = ResidueFunctional::sample(&f, &p, &probes, 0.5, &opts).unwrap();
    println!("sampled the functional on {} basis directions", func.sampled.len());

    let m = num("e1");
    let g = parse("e2*(z - 0.3)^-1*e3 + e5*(z + 0.4*e1)^-1 + z^2", o).unwrap();
    let psi = Path::circle(&CDNumber::zero(o), 1.0, &m, 1.0).unwrap();
    let rep = residue_theorem_check(&g, &[num("0.3"), num("-0.4*e1")], &psi, &opts).unwrap();
    println!("residue theorem: lhs {} rhs {} diff {:.2e}", rep.lhs, rep.rhs, rep.diff);

    let h = parse("e2*(z - 0.3)^-1*e3 + e5*(z + 0.4*e1)^-1", o).unwrap();
    let s = sum_residues_check(&h, &[num("0.3"), num("-0.4*e1")], &m, &opts).unwrap();
    println!("finite residues {} + infinity {} -> |sum| = {:.2e}", s.finite, s.at_infinity, s.total);
}
