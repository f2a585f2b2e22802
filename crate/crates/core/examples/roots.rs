//! Roots of polynomials over the quaternions and octonions.
use cayley_analysis::contour::{find_root, RootOptions};
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    for (r, src) in [(2, "z^3 + e1*z^2 + (1 + e2)*z - e3"), (3, "z^4 - e5*z + 2 + e7"), (2, "z^2 + 1")] {
        let l = AlgebraLevel::new(r).unwrap();
        let p = parse(src, l).unwrap();
        let res = find_root(&p, &CDNumber::zero(l), &RootOptions::default()).unwrap();
        println!("{src}: root {} |P| = {:.1e} after {} iterations, {} restarts", res.root, res.residual, res.iterations, res.restarts);
    }
}
