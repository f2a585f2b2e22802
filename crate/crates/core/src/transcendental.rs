//! Exponential, principal logarithm, polar form and trigonometric functions.
//!
//! Every element `z = v + M` lies in the commutative plane `R + R M`, so these
//! functions reduce to their complex counterparts on that plane.

use serde::Serialize;

use crate::algebra::{AlgebraLevel, CDNumber, EPS_ZERO};
use crate::error::{Error, Result};

/// `z = rho * exp(theta * direction)` with `theta` in `[0, pi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolarForm {
    pub rho: f64,
    pub direction: CDNumber,
    pub theta: f64,
}

impl PolarForm {
    pub fn reconstruct(&self) -> CDNumber {
        exp(&self.direction.scale(self.theta)).scale(self.rho)
    }
}

/// Unit direction of `Im z`, or `e1` when `z` is real.
pub fn imaginary_direction(z: &CDNumber) -> CDNumber {
    let m = z.im();
    let mu = m.norm();
    if mu == 0.0 {
        default_direction(z.level())
    } else {
        m.scale(1.0 / mu)
    }
}

fn default_direction(level: AlgebraLevel) -> CDNumber {
    CDNumber::basis(level, 1).expect("every level has e1")
}

pub fn exp(z: &CDNumber) -> CDNumber {
    let (v, m) = z.split();
    let mu = m.norm();
    let ev = v.exp();
    if mu == 0.0 {
        return CDNumber::real(z.level(), ev);
    }
    let mut out = m.scale(ev * mu.sin() / mu);
    out = &out + &CDNumber::real(z.level(), ev * mu.cos());
    out
}

/// Truncated power series `sum_{n < terms} z^n / n!`.
pub fn exp_series(z: &CDNumber, terms: usize) -> CDNumber {
    let mut term = CDNumber::one(z.level());
    let mut sum = CDNumber::zero(z.level());
    for n in 0..terms {
        if n > 0 {
            term = (z * &term).scale(1.0 / n as f64);
        }
        sum += &term;
    }
    sum
}

pub fn polar_decompose(z: &CDNumber) -> PolarForm {
    let (v, m) = z.split();
    let mu = m.norm();
    PolarForm {
        rho: z.norm(),
        direction: imaginary_direction(z),
        theta: mu.atan2(v),
    }
}

/// Principal logarithm `ln|z| + theta M`.
pub fn ln_principal(z: &CDNumber) -> Result<CDNumber> {
    let p = polar_decompose(z);
    if p.rho <= EPS_ZERO {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    Ok(&CDNumber::real(z.level(), p.rho.ln()) + &p.direction.scale(p.theta))
}

/// Directional derivative `DLn(z).h` of the principal logarithm.
///
/// With `z = v + mu N`, `|N| = 1`, the component of `h` in the plane
/// `R + R N` is mapped by `z^{-1}` and the orthogonal component `h_perp`
/// (which only turns the direction `N`) by `theta / mu`.
pub fn dln_apply(z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
    let rho = z.norm();
    if rho <= EPS_ZERO {
        return Err(Error::Pole { distance: rho });
    }
    let (v, m) = z.split();
    let mu = m.norm();
    let hn = h.norm();
    let plane = if mu > 1e-12 * rho {
        m.scale(1.0 / mu)
    } else {
        // real z (up to rounding): take the plane containing h
        let hi = h.im();
        let t = hi.norm();
        if t == 0.0 {
            default_direction(z.level())
        } else {
            hi.scale(1.0 / t)
        }
    };
    let along = CDNumber::real(z.level(), h.re()) + plane.scale(h.dot(&plane));
    let mut perp = h - &along;
    if perp.norm() <= 1e-12 * hn {
        perp = CDNumber::zero(z.level());
    }
    let zinv = z.inverse()?;
    let mut out = &along * &zinv;
    if perp.norm() > 0.0 {
        if v < 0.0 && mu < 1e-8 * rho {
            return Err(Error::CutProximity(format!(
                "DLn at {z} in a direction leaving the plane of the negative real axis"
            )));
        }
        let theta = mu.atan2(v);
        let factor = if mu > 0.0 { theta / mu } else { 1.0 / v };
        out += &perp.scale(factor);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Cos,
    Sin,
    Cosh,
    Sinh,
}

/// `cos`, `sin`, `cosh`, `sinh` through the plane identities
/// `cos(v + yM) = cos v cosh y - sin v sinh y M`,
/// `sin(v + yM) = sin v cosh y + cos v sinh y M`.
pub fn trig(z: &CDNumber, which: Trig) -> CDNumber {
    let lv = z.level();
    let (v, m) = z.split();
    let y = m.norm();
    let dir = imaginary_direction(z);
    match which {
        Trig::Cos => CDNumber::real(lv, v.cos() * y.cosh()) - dir.scale(v.sin() * y.sinh()),
        Trig::Sin => CDNumber::real(lv, v.sin() * y.cosh()) + dir.scale(v.cos() * y.sinh()),
        Trig::Cosh => (exp(z) + exp(&-z)).scale(0.5),
        Trig::Sinh => (exp(z) - exp(&-z)).scale(0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn lv(r: u32) -> AlgebraLevel {
        AlgebraLevel::new(r).unwrap()
    }

    fn e(l: AlgebraLevel, k: usize) -> CDNumber {
        CDNumber::basis(l, k).unwrap()
    }

    // central difference of the principal logarithm
    fn dln_fd(z: &CDNumber, h: &CDNumber, eps: f64) -> CDNumber {
        let p = ln_principal(&(z + &h.scale(eps))).unwrap();
        let m = ln_principal(&(z - &h.scale(eps))).unwrap();
        (p - m).scale(0.5 / eps)
    }

    #[test]
    fn exp_examples() {
        let o = lv(3);
        assert_eq!(exp(&CDNumber::zero(o)), CDNumber::one(o));
        assert!(exp(&e(o, 1).scale(PI)).distance(&CDNumber::real(o, -1.0)) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = CDNumber::random_unit_imaginary(lv(4), &mut rng);
        assert!(exp(&m.scale(PI / 2.0)).distance(&m) < 1e-15);
    }

    #[test]
    fn exp_series_examples() {
        let q = lv(2);
        assert_eq!(exp_series(&CDNumber::zero(q), 10), CDNumber::one(q));
        let e2 = exp_series(&CDNumber::real(q, 2.0), 40);
        assert!((e2.re() - 2f64.exp()).abs() < 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for r in 2..=4 {
            for _ in 0..200 {
                let z = CDNumber::random(lv(r), &mut rng);
                let z = z.scale(rng.gen_range(0.0..3.0) / z.norm());
                assert!(exp_series(&z, 40).distance(&exp(&z)) < 1e-10);
            }
        }
    }

    #[test]
    fn ln_examples() {
        let o = lv(3);
        let one = ln_principal(&CDNumber::real(o, std::f64::consts::E)).unwrap();
        assert!(one.distance(&CDNumber::one(o)) < 1e-15);
        let l = ln_principal(&CDNumber::real(o, -1.0)).unwrap();
        assert!(l.distance(&e(o, 1).scale(PI)) < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = CDNumber::random_unit_imaginary(o, &mut rng);
        let z = exp(&m.scale(1.1)).scale(2.0);
        let w = ln_principal(&z).unwrap();
        let want = CDNumber::real(o, 2f64.ln()) + m.scale(1.1);
        assert!(w.distance(&want) < 1e-14);
        assert!(exp(&w).distance(&z) < 1e-14);
        assert!(matches!(ln_principal(&CDNumber::zero(o)), Err(Error::Domain(_))));
    }

    #[test]
    fn polar_examples() {
        let c = lv(1);
        let p = polar_decompose(&CDNumber::from_coeffs(c, vec![1.0, 1.0]).unwrap());
        assert!((p.rho - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.direction, e(c, 1));
        assert!((p.theta - PI / 4.0).abs() < 1e-15);
        let p = polar_decompose(&CDNumber::real(lv(3), -5.0));
        assert_eq!((p.rho, p.theta), (5.0, PI));
        assert_eq!(p.direction, e(lv(3), 1));
        let p = polar_decompose(&CDNumber::zero(lv(2)));
        assert_eq!((p.rho, p.theta), (0.0, 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for r in 1..=5 {
            let z = CDNumber::random(lv(r), &mut rng);
            let p = polar_decompose(&z);
            assert!(p.reconstruct().distance(&z) < 1e-12 * z.norm());
            assert!((0.0..=PI).contains(&p.theta));
        }
    }

    #[test]
    fn modulus_and_periodicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 2..=4 {
            for _ in 0..1000 {
                let z = CDNumber::random(lv(r), &mut rng).scale(2.0);
                let m = exp(&z).norm();
                assert!((m - z.re().exp()).abs() <= 1e-12 * z.re().exp());
                let im = z.im();
                assert!((exp(&im).norm() - 1.0).abs() < 1e-12);
                for n in 1..=3 {
                    let t = 1.0 + 2.0 * PI * n as f64 / im.norm();
                    assert!(exp(&im.scale(t)).distance(&exp(&im)) < 1e-10);
                }
            }
        }
        let m = CDNumber::random_unit_imaginary(lv(3), &mut rng);
        let one = CDNumber::one(lv(3));
        assert!(exp(&m.scale(2.0 * PI)).distance(&one) < 1e-14);
        assert!(exp(&m.scale(4.0 * PI)).distance(&one) < 1e-14);
        assert!(exp(&m.scale(PI)).distance(&-one) < 1e-14);
    }

    #[test]
    fn exp_not_a_homomorphism() {
        let q = lv(2);
        let a = e(q, 1);
        let b = e(q, 2);
        let lhs = exp(&(&a + &b));
        let rhs = &exp(&a) * &exp(&b);
        assert!(lhs.distance(&rhs) > 0.1);
    }

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for r in 1..=4 {
            for _ in 0..200 {
                let z = CDNumber::random(lv(r), &mut rng);
                assert!(exp(&ln_principal(&z).unwrap()).distance(&z) < 1e-12 * z.norm());
                let m = CDNumber::random_unit_imaginary(lv(r), &mut rng);
                let w = CDNumber::real(lv(r), rng.gen_range(-2.0..2.0))
                    + m.scale(rng.gen_range(0.05..3.0));
                assert!(ln_principal(&exp(&w)).unwrap().distance(&w) < 1e-12);
            }
        }
    }

    #[test]
    fn dln_examples() {
        let o = lv(3);
        let d = dln_apply(&CDNumber::real(o, 2.0), &CDNumber::one(o)).unwrap();
        assert_eq!(d, CDNumber::real(o, 0.5));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let z = CDNumber::random(o, &mut rng);
            let d = dln_apply(&z, &CDNumber::one(o)).unwrap();
            assert!(d.distance(&z.inverse().unwrap()) < 1e-12 * (1.0 + d.norm()));
        }
        // along exp(t e1) at t = pi/2 the tangent is e1 z = -1 and Ln moves by e1
        let z = e(o, 1);
        let tangent = &e(o, 1) * &z;
        let d = dln_apply(&z, &tangent).unwrap();
        assert!(d.distance(&dln_fd(&z, &tangent, 1e-6)) < 1e-7);
        assert!(d.distance(&e(o, 1)) < 1e-15);
    }

    #[test]
    fn dln_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for r in 1..=5 {
            for _ in 0..100 {
                let z = CDNumber::random(lv(r), &mut rng);
                if z.re() < 0.0 && z.im().norm() < 0.1 {
                    continue;
                }
                let h = CDNumber::random(lv(r), &mut rng);
                let d = dln_apply(&z, &h).unwrap();
                let fd = dln_fd(&z, &h, 1e-6 * (1.0 + z.norm()));
                assert!(d.distance(&fd) < 1e-7 * (1.0 + d.norm()), "r={r} z={z} h={h}");
            }
        }
    }

    #[test]
    fn dln_near_the_cut() {
        let o = lv(3);
        let neg = CDNumber::real(o, -2.0);
        // in the plane of h the logarithm continues smoothly
        let d = dln_apply(&neg, &e(o, 3)).unwrap();
        assert!(d.distance(&e(o, 3).scale(-0.5)) < 1e-15);
        let z = &neg + &e(o, 2).scale(1e-10);
        assert!(matches!(
            dln_apply(&z, &e(o, 5)),
            Err(Error::CutProximity(_))
        ));
        assert!(dln_apply(&CDNumber::zero(o), &e(o, 1)).is_err());
    }

    #[test]
    fn dln_additive_and_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let o = lv(3);
        for _ in 0..100 {
            let z = CDNumber::random(o, &mut rng);
            let h1 = CDNumber::random(o, &mut rng);
            let h2 = CDNumber::random(o, &mut rng);
            let s = dln_apply(&z, &(&h1 + &h2)).unwrap();
            let t = dln_apply(&z, &h1).unwrap() + dln_apply(&z, &h2).unwrap();
            assert!(s.distance(&t) < 1e-10 * (1.0 + s.norm()));
            let k = dln_apply(&z, &h1.scale(-3.5)).unwrap();
            assert!(k.distance(&dln_apply(&z, &h1).unwrap().scale(-3.5)) < 1e-12 * (1.0 + k.norm()));
        }
    }

    #[test]
    fn trig_examples() {
        let o = lv(3);
        assert_eq!(trig(&CDNumber::zero(o), Trig::Cos), CDNumber::one(o));
        let c = trig(&e(o, 1).scale(PI), Trig::Cos);
        assert!(c.distance(&CDNumber::real(o, PI.cosh())) < 1e-12);
        for v in [-2.0, 0.3, 1.7] {
            let s = trig(&CDNumber::real(o, v), Trig::Sin);
            assert!((s.re() - f64::sin(v)).abs() < 1e-14 && s.im().norm() == 0.0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..100 {
            let z = CDNumber::random(o, &mut rng);
            let (v, m) = z.split();
            let y = m.norm();
            let n = m.scale(1.0 / y);
            let want = CDNumber::real(o, v.cos() * y.cosh()) - n.scale(v.sin() * y.sinh());
            assert!(trig(&z, Trig::Cos).distance(&want) < 1e-12);
            // cos(z) = cosh(zN) and sin(z) = -sinh(zN) N in the plane of z
            let zn = &z * &n;
            assert!(trig(&z, Trig::Cos).distance(&trig(&zn, Trig::Cosh)) < 1e-12);
            let s = -(&trig(&zn, Trig::Sinh) * &n);
            assert!(trig(&z, Trig::Sin).distance(&s) < 1e-12);
            let c2 = &trig(&z, Trig::Cos) * &trig(&z, Trig::Cos);
            let s2 = &trig(&z, Trig::Sin) * &trig(&z, Trig::Sin);
            assert!((c2 + s2).distance(&CDNumber::one(o)) < 1e-12);
        }
    }
}
