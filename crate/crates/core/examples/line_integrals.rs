//! Noncommutative line integrals over circles, polylines and custom paths.
use std::f64::consts::PI;

use cayley_analysis::integrate::{
    integral_sum, line_integral, stieltjes_integral, Extrapolation, Partition, Path,
    QuadratureOptions,
};
use cayley_analysis::transcendental::exp;
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let num = |s: &str| parse(s, o).unwrap().constant_value().unwrap();
    let f = parse("z^-1", o).unwrap();
    let circle = Path::circle(&CDNumber::zero(o), 1.0, &num("e1"), 1.0).unwrap();

    let r = line_integral(&f, &circle, &QuadratureOptions::default()).unwrap();
    println!("oint z^-1 dz = {} (est {:.1e}, {} doublings)", r.value, r.est_error, r.refinements);
    println!("2 pi e1 - value = {:.2e}", r.value.distance(&num("e1").scale(2.0 * PI)));

    let plain = QuadratureOptions { extrapolation: Extrapolation::None, max_knots: 1 << 14, ..Default::default() };
    let p = line_integral(&f, &circle, &plain).unwrap();
    println!("without extrapolation: error {:.2e}, converged {}", p.value.distance(&num("e1").scale(2.0 * PI)), p.converged);
    println!("single sum on 1000 knots: {}", integral_sum(&f, &circle, &Partition::uniform(1000)).unwrap());

    let g = parse("e2*(z^2*e3) + 1", o).unwrap();
    let square = Path::square(&num("0.2"), 0.5, &num("e4")).unwrap();
    println!("closed square, polynomial: {:.2e}", line_integral(&g, &square, &QuadratureOptions::default()).unwrap().value.norm());
    let open = Path::polyline(vec![num("0"), num("1 + e5"), num("2*e6")]).unwrap();
    let prim = g.primitive().unwrap();
    let want = prim.evaluate(&num("2*e6")).unwrap() - prim.evaluate(&num("0")).unwrap();
    let got = line_integral(&g, &open, &QuadratureOptions::default()).unwrap().value;
    println!("open polyline vs primitive: {:.2e}", got.distance(&want));

    // a user-supplied path: an ellipse in the (1, e3) plane
    let m = num("e3");
    let ellipse = Path::parametric(o, move |t| {
        let w = exp(&m.scale(2.0 * PI * t));
        Ok(CDNumber::from_coeffs(o, w.coeffs().iter().enumerate().map(|(i, c)| if i == 0 { 2.0 * c } else { *c }).collect()).unwrap())
    });
    println!("oint z^-1 over an ellipse: {}", line_integral(&f, &ellipse, &QuadratureOptions::default()).unwrap().value);

    let q = parse("z^2", o).unwrap();
    let s = stieltjes_integral(&parse("1", o).unwrap(), &q, &open, &QuadratureOptions::default()).unwrap();
    println!("int d(z^2) over the polyline: {} (endpoint difference {})", s.value, (&num("2*e6") * &num("2*e6")));
}
