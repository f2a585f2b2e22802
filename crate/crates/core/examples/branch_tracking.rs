//! The continued logarithm along a path: log integrals, the index vector
//! and the planar winding numbers.
use cayley_analysis::contour::{ar_index, winding_index};
use cayley_analysis::integrate::{log_integral, BranchState, Path};
use cayley_analysis::{parse, AlgebraLevel, CDNumber};

fn main() {
    let o = AlgebraLevel::OCTONION;
    let num = |s: &str| parse(s, o).unwrap().constant_value().unwrap();
    let m = num("0.6*e2 + 0.8*e5");
    let twice = Path::circle(&num("0.1"), 1.0, &m, 2.0).unwrap();
    let r = log_integral(&CDNumber::zero(o), &twice, 1e-8).unwrap();
    println!("oint dLn z over a doubled circle = {}", r.value);
    println!("index = {}", ar_index(&CDNumber::zero(o), &twice, 1e-8).unwrap().value);
    println!("outside point: {}", ar_index(&num("3"), &twice, 1e-8).unwrap().value);
    println!("winding per plane: {}", serde_json::to_string(&winding_index(&CDNumber::zero(o), &twice).unwrap()).unwrap());

    // following Ln by hand across the negative real axis
    let mut st = BranchState::start(&num("1 + e1"));
    for w in ["-1 + e1", "-1 - e1", "1 - e1", "1 + e1"] {
        st = st.continue_to(&num(w));
        println!("at {w:>7}: theta = {:+.4}, Ln = {}", st.accumulated_arg, st.log_value(&num(w)));
    }
}
