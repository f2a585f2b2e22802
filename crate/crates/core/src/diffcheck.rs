//! Finite-difference checks of superdifferentiability: the Cauchy-Riemann
//! system `dF/dw_1 = (dF/dw_q) q*`, pairwise harmonicity of the components,
//! and the vanishing of the `z~` differential on paired planes.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::algebra::{AlgebraLevel, BasisTable, CDNumber};
use crate::error::{Error, Result};
use crate::expr::Phrase;

pub const DEFAULT_STEP: f64 = 1e-5;
pub const DEFAULT_THRESHOLD: f64 = 1e-4;
/// Second differences use this multiple of the first-difference step.
const SECOND_STEP_FACTOR: f64 = 100.0;

type Field = Arc<dyn Fn(&CDNumber) -> Result<CDNumber> + Send + Sync>;

/// A map `R^{2^r} -> R^{2^r}`, `F = sum_s F_s i_s`, with the coordinates
/// of its argument and value in basis order.
#[derive(Clone)]
pub struct RealFieldSample {
    level: AlgebraLevel,
    field: Field,
    /// The phrase behind the field, when there is one; needed to vary the
    /// `z~` slot on its own.
    slots: Option<Phrase>,
    /// Absolute step; `None` means `1e-5 (1 + |z|)`.
    pub step: Option<f64>,
}

impl std::fmt::Debug for RealFieldSample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealFieldSample")
            .field("level", &self.level)
            .field("slots", &self.slots.as_ref().map(|p| p.to_string()))
            .field("step", &self.step)
            .finish()
    }
}

impl RealFieldSample {
    pub fn from_phrase(f: &Phrase) -> RealFieldSample {
        let g = f.clone();
        RealFieldSample {
            level: f.level(),
            field: Arc::new(move |z| g.evaluate(z)),
            slots: Some(f.clone()),
            step: None,
        }
    }

    pub fn from_fn(
        level: AlgebraLevel,
        f: impl Fn(&CDNumber) -> Result<CDNumber> + Send + Sync + 'static,
    ) -> RealFieldSample {
        RealFieldSample {
            level,
            field: Arc::new(f),
            slots: None,
            step: None,
        }
    }

    pub fn with_step(mut self, step: f64) -> RealFieldSample {
        self.step = Some(step);
        self
    }

    pub fn level(&self) -> AlgebraLevel {
        self.level
    }

    pub fn eval(&self, z: &CDNumber) -> Result<CDNumber> {
        (self.field)(z)
    }

    fn step_at(&self, z: &CDNumber) -> f64 {
        self.step.unwrap_or(DEFAULT_STEP * (1.0 + z.norm()))
    }

    fn shifted(&self, z: &CDNumber, s: usize, t: f64) -> Result<CDNumber> {
        let mut c = z.coeffs().to_vec();
        c[s] += t;
        self.eval(&CDNumber::from_coeffs(self.level, c)?)
    }

    /// Central difference `dF/dw_s`.
    pub fn partial(&self, z: &CDNumber, s: usize) -> Result<CDNumber> {
        let h = self.step_at(z);
        Ok((self.shifted(z, s, h)? - self.shifted(z, s, -h)?).scale(0.5 / h))
    }

    /// Central second difference `d^2F/dw_s^2`.
    pub fn second_partial(&self, z: &CDNumber, s: usize, fz: &CDNumber) -> Result<CDNumber> {
        let h = SECOND_STEP_FACTOR * self.step_at(z);
        let sum = &self.shifted(z, s, h)? + &self.shifted(z, s, -h)?;
        Ok((&sum - &fz.scale(2.0)).scale(1.0 / (h * h)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CRReport {
    pub max_residual: f64,
    /// Residual per plane or pair, labelled `e1`, `e2`, ... or `e0:e3`.
    pub per_plane: Vec<(String, f64)>,
    pub threshold: f64,
    pub verdict: Verdict,
}

impl CRReport {
    fn new(per_plane: Vec<(String, f64)>, threshold: f64) -> CRReport {
        let max_residual = per_plane.iter().map(|p| p.1).fold(0.0, f64::max);
        let verdict = if max_residual <= threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CRReport {
            max_residual,
            per_plane,
            threshold,
            verdict,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn residual(&self, label: &str) -> Option<f64> {
        self.per_plane.iter().find(|p| p.0 == label).map(|p| p.1)
    }
}

impl Serialize for CRReport {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        struct Planes<'a>(&'a [(String, f64)]);
        impl Serialize for Planes<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = ser.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(k, v)?;
                }
                m.end()
            }
        }
        let mut m = ser.serialize_map(Some(4))?;
        m.serialize_entry("max_residual", &self.max_residual)?;
        m.serialize_entry("per_plane", &Planes(&self.per_plane))?;
        m.serialize_entry("threshold", &self.threshold)?;
        m.serialize_entry("verdict", &self.verdict)?;
        m.end()
    }
}

fn check_inputs(f: &RealFieldSample, z: &CDNumber, threshold: f64) -> Result<()> {
    if f.level != z.level() {
        return Err(Error::LevelMismatch {
            left: f.level.r(),
            right: z.level().r(),
        });
    }
    if !(threshold > 0.0) {
        return Err(Error::Invalid(format!("threshold must be positive, got {threshold}")));
    }
    Ok(())
}

/// `|dF/dw_1 - (dF/dw_q) q*|` for every imaginary unit `q`.
pub fn cr_check(f: &RealFieldSample, z: &CDNumber, threshold: f64) -> Result<CRReport> {
    check_inputs(f, z, threshold)?;
    let d1 = f.partial(z, 0)?;
    let mut per = Vec::new();
    for q in 1..f.level.dim() {
        let qc = CDNumber::basis(f.level, q)?.conj();
        let dq = f.partial(z, q)?;
        per.push((format!("e{q}"), d1.distance(&(&dq * &qc))));
    }
    Ok(CRReport::new(per, threshold))
}

/// `max_s |d^2F_s/dw_p^2 + d^2F_s/dw_q^2|` for every pair `p < q` of
/// coordinates, the real one included.
pub fn harmonic_check(f: &RealFieldSample, z: &CDNumber, threshold: f64) -> Result<CRReport> {
    check_inputs(f, z, threshold)?;
    let fz = f.eval(z)?;
    let dim = f.level.dim();
    let second = (0..dim)
        .map(|s| f.second_partial(z, s, &fz))
        .collect::<Result<Vec<_>>>()?;
    let mut per = Vec::new();
    for p in 0..dim {
        for q in p + 1..dim {
            let lap = &second[p] + &second[q];
            let worst = lap.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            per.push((format!("e{p}:e{q}"), worst));
        }
    }
    Ok(CRReport::new(per, threshold))
}

/// The `z~` differential along the paired units `s = i_{2j}`, `p = i_{2j+1}`:
/// residual `j` is `max(|D_{z~} f(z).s|, |D_{z~} f(z).p|)`, measured by
/// moving only the `z~` slot (by `h~`). Needs a phrase-backed sample.
pub fn zbar_check(f: &RealFieldSample, z: &CDNumber, threshold: f64) -> Result<CRReport> {
    check_inputs(f, z, threshold)?;
    let phrase = f.slots.as_ref().ok_or_else(|| {
        Error::Unsupported("the z~ differential needs a field given by a phrase".into())
    })?;
    let h = f.step_at(z);
    let zc = z.conj();
    let slot_diff = |k: usize| -> Result<f64> {
        let dir = CDNumber::basis(f.level, k)?.conj().scale(h);
        let up = phrase.evaluate_slots(z, &(&zc + &dir))?;
        let down = phrase.evaluate_slots(z, &(&zc - &dir))?;
        Ok((up - down).norm() * 0.5 / h)
    };
    let mut per = Vec::new();
    for j in 0..f.level.dim() / 2 {
        let r = slot_diff(2 * j)?.max(slot_diff(2 * j + 1)?);
        per.push((format!("e{}:e{}", 2 * j, 2 * j + 1), r));
    }
    Ok(CRReport::new(per, threshold))
}

/// A polynomial map in the real coordinates:
/// `F = sum coeff * w^exponents * i_component`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealPolynomialMap {
    pub level: AlgebraLevel,
    pub terms: Vec<PolyTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolyTerm {
    pub component: usize,
    pub exponents: Vec<u8>,
    pub coeff: f64,
}

impl RealPolynomialMap {
    pub fn evaluate(&self, z: &CDNumber) -> CDNumber {
        let w = z.coeffs();
        let mut out = vec![0.0; self.level.dim()];
        for t in &self.terms {
            let mono: f64 = t
                .exponents
                .iter()
                .zip(w)
                .map(|(&e, &x)| x.powi(e as i32))
                .product();
            out[t.component] += t.coeff * mono;
        }
        CDNumber::from_coeffs(self.level, out).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .iter()
            .map(|t| t.exponents.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Highest degree carrying a nonzero term.
    pub fn effective_degree(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| t.coeff != 0.0)
            .map(|t| t.exponents.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn sample(&self) -> RealFieldSample {
        let p = self.clone();
        RealFieldSample::from_fn(self.level, move |z| Ok(p.evaluate(z)))
    }
}

/// All exponent vectors of total degree `d` in `n` variables.
fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, d: usize, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n - 1 {
            prefix.push(d as u8);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e as u8);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Union-find over unknowns tied by `x_a = ratio * x_b`.
struct RatioSets {
    parent: Vec<usize>,
    /// `x_i = ratio[i] * x_parent[i]`.
    ratio: Vec<f64>,
    zero: Vec<bool>,
}

impl RatioSets {
    fn new(n: usize) -> RatioSets {
        RatioSets {
            parent: (0..n).collect(),
            ratio: vec![1.0; n],
            zero: vec![false; n],
        }
    }

    fn find(&mut self, i: usize) -> (usize, f64) {
        if self.parent[i] == i {
            return (i, 1.0);
        }
        let (root, r) = self.find(self.parent[i]);
        self.parent[i] = root;
        self.ratio[i] *= r;
        (root, self.ratio[i])
    }

    fn tie(&mut self, a: usize, b: usize, ratio: f64) {
        let (ra, xa) = self.find(a);
        let (rb, xb) = self.find(b);
        if ra == rb {
            // x_a = xa x_root must equal ratio * xb x_root
            if (xa - ratio * xb).abs() > 1e-12 * (xa.abs() + (ratio * xb).abs()) {
                self.zero[ra] = true;
            }
            return;
        }
        // x_ra = (ratio * xb / xa) x_rb
        self.parent[ra] = rb;
        self.ratio[ra] = ratio * xb / xa;
        self.zero[rb] |= self.zero[ra];
    }
}

/// A random real polynomial map of degree `<= degree` whose homogeneous
/// parts solve the two-term coefficient relations obtained by inserting
/// `F = sum C_{s; j} w^j s` into `dF_u/dw_1 = ((dF/dw_q) q*)_u`:
/// `(j_1 + 1) C_{u; j + e_1} = -sign(t, q) (j_q + 1) C_{t; j + e_q}` where
/// `i_t i_q = sign(t, q) i_u`. Each relation ties two unknowns, so the
/// system is solved by propagating ratios; a cycle with inconsistent
/// ratios forces its unknowns to zero and the remaining classes get
/// independent random values.
pub fn right_superlinear_polynomial<R: Rng + ?Sized>(
    level: AlgebraLevel,
    degree: usize,
    rng: &mut R,
) -> RealPolynomialMap {
    let dim = level.dim();
    let table = BasisTable::get(level);
    let mut terms = Vec::new();
    for u in 0..dim {
        terms.push(PolyTerm {
            component: u,
            exponents: vec![0; dim],
            coeff: rng.gen_range(-1.0..1.0),
        });
    }
    // t with i_t i_q = +-i_u, for each q
    let mut preimage = vec![vec![(0usize, 0i8); dim]; dim];
    for q in 1..dim {
        for t in 0..dim {
            let (sign, u) = table.product(t, q);
            preimage[q][u] = (t, sign);
        }
    }
    for d in 1..=degree {
        let monos = monomials(dim, d);
        let index: HashMap<&[u8], usize> =
            monos.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
        let var = |comp: usize, mono: usize| comp * monos.len() + mono;
        let mut sets = RatioSets::new(dim * monos.len());
        for beta in monomials(dim, d - 1) {
            let bump = |k: usize| {
                let mut m = beta.clone();
                m[k] += 1;
                index[m.as_slice()]
            };
            let m1 = bump(0);
            for q in 1..dim {
                let mq = bump(q);
                for u in 0..dim {
                    let (t, sign) = preimage[q][u];
                    let ratio = -(sign as f64) * (beta[q] as f64 + 1.0) / (beta[0] as f64 + 1.0);
                    sets.tie(var(u, m1), var(t, mq), ratio);
                }
            }
        }
        let mut root_value = HashMap::new();
        for comp in 0..dim {
            for (mi, mono) in monos.iter().enumerate() {
                let (root, r) = sets.find(var(comp, mi));
                if sets.zero[root] {
                    continue;
                }
                let v = *root_value
                    .entry(root)
                    .or_insert_with(|| rng.gen_range(-1.0..1.0));
                terms.push(PolyTerm {
                    component: comp,
                    exponents: mono.clone(),
                    coeff: r * v,
                });
            }
        }
    }
    RealPolynomialMap { level, terms }
}
