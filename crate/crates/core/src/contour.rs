//! Contour functionals: winding data, the `A_r`-index, residues, Cauchy
//! integrals, Taylor/Laurent coefficients, residue and argument-principle
//! checks, and polynomial roots.
//!
//! Kernel integrals `oint f(zeta) (zeta - a)^m dzeta` are summed as
//! `f(zeta_{k+1}) (D q(zeta_{k+1}).dzeta_k)` with `q` a primitive of the
//! kernel, so the bracket is always `f * (kernel * dzeta)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::algebra::{AlgebraLevel, CDNumber};
use crate::error::{Error, Result};
use crate::expr::{Differential, Phrase, Var};
use crate::integrate::{
    line_integral, line_integral_op, log_integral, OperatorIntegrand, Path, QuadratureOptions,
    QuadratureResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The functional value was right-multiplied by `M*` to recover a value.
    Value,
    /// Returned as the functional value `c M`.
    Functional,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourValue {
    pub value: CDNumber,
    /// `value * M*` when that recovers the plain value.
    pub recovered: Option<CDNumber>,
    pub est_error: f64,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContourReport {
    pub lhs: CDNumber,
    pub rhs: CDNumber,
    pub diff: f64,
    pub est_error: f64,
    pub mode: Mode,
}

impl ContourReport {
    fn new(lhs: CDNumber, rhs: CDNumber, est_error: f64, mode: Mode) -> ContourReport {
        ContourReport {
            diff: lhs.distance(&rhs),
            lhs,
            rhs,
            est_error,
            mode,
        }
    }
}

/// Coefficients `c_k` for `k = k_min, k_min + 1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficients {
    pub k_min: i32,
    pub coeffs: Vec<CDNumber>,
    pub est_error: f64,
    pub mode: Mode,
}

impl Coefficients {
    pub fn get(&self, k: i32) -> Option<&CDNumber> {
        usize::try_from(k - self.k_min).ok().and_then(|i| self.coeffs.get(i))
    }
}

/// Winding numbers of the projections onto the planes `R + R i_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexVector {
    /// Entry `s - 1` belongs to plane `s`; `None` where the projected curve
    /// comes within `1e-9` of the projected point.
    pub per_plane: Vec<Option<i64>>,
}

impl IndexVector {
    pub fn get(&self, s: usize) -> Option<i64> {
        self.per_plane.get(s.checked_sub(1)?).copied().flatten()
    }
}

impl Serialize for IndexVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(self.per_plane.len()))?;
        for (i, v) in self.per_plane.iter().enumerate() {
            m.serialize_entry(&format!("e{}", i + 1), v)?;
        }
        m.end()
    }
}

const PROJECTION_EPS: f64 = 1e-9;

pub fn winding_index(a: &CDNumber, gamma: &Path) -> Result<IndexVector> {
    same_level(a.level(), gamma.level())?;
    let dim = a.level().dim();
    let mut n = 1024usize;
    loop {
        let part = gamma.partition(n, 0);
        let pts = part
            .knots()
            .iter()
            .map(|&t| Ok(&gamma.sample(t)? - a))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(dim - 1);
        let mut worst: f64 = 0.0;
        for s in 1..dim {
            let proj = |w: &CDNumber| (w.coeffs()[0], w.coeffs()[s]);
            if pts.iter().any(|w| {
                let (x, y) = proj(w);
                x.hypot(y) <= PROJECTION_EPS
            }) {
                entries.push(None);
                continue;
            }
            let mut total = 0.0;
            for w in pts.windows(2) {
                let (x0, y0) = proj(&w[0]);
                let (x1, y1) = proj(&w[1]);
                let d = (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
                worst = worst.max(d.abs());
                total += d;
            }
            entries.push(Some((total / (2.0 * PI)).round() as i64));
        }
        if worst < PI / 4.0 || n >= 1 << 16 {
            return Ok(IndexVector { per_plane: entries });
        }
        n *= 4;
    }
}

/// `(2 pi)^-1 oint dLn(z - a)`; equals `n M` for an `n`-turn circle in the
/// plane of `M` around `a`.
pub fn ar_index(a: &CDNumber, gamma: &Path, tol: f64) -> Result<QuadratureResult> {
    let mut r = log_integral(a, gamma, tol)?;
    r.value = r.value.scale(1.0 / (2.0 * PI));
    r.est_error /= 2.0 * PI;
    Ok(r)
}

/// `res(p, f) M = (2 pi)^-1 oint f dz` over the circle `p + rho exp(2 pi t M)`,
/// extended to non-unit `M` by `|M| res(p, f)(M / |M|)`.
pub fn residue(
    f: &Phrase,
    p: &CDNumber,
    m: &CDNumber,
    rho: f64,
    opts: &QuadratureOptions,
) -> Result<ContourValue> {
    let len = m.norm();
    let circle = Path::circle(p, rho, m, 1.0)?;
    let r = line_integral(f, &circle, opts)?;
    check_converged(&r)?;
    Ok(ContourValue {
        value: r.value.scale(len / (2.0 * PI)),
        recovered: None,
        est_error: r.est_error * len / (2.0 * PI),
        mode: Mode::Functional,
    })
}

/// Sampled values of the functional `M -> res(center, f) M`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueFunctional {
    pub center: CDNumber,
    pub sampled: Vec<(CDNumber, CDNumber)>,
}

impl ResidueFunctional {
    pub fn sample(
        f: &Phrase,
        center: &CDNumber,
        probes: &[CDNumber],
        rho: f64,
        opts: &QuadratureOptions,
    ) -> Result<ResidueFunctional> {
        let sampled = probes
            .iter()
            .map(|m| Ok((m.clone(), residue(f, center, m, rho, opts)?.value)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResidueFunctional {
            center: center.clone(),
            sampled,
        })
    }
}

fn check_converged(r: &QuadratureResult) -> Result<()> {
    if r.converged {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            iterations: r.refinements,
            residual: r.est_error,
        })
    }
}

fn same_level(a: AlgebraLevel, b: AlgebraLevel) -> Result<()> {
    if a != b {
        return Err(Error::LevelMismatch {
            left: a.r(),
            right: b.r(),
        });
    }
    Ok(())
}

struct Circle {
    radius: f64,
    direction: CDNumber,
    turns: f64,
}

fn circle_of(psi: &Path) -> Result<Circle> {
    match psi {
        Path::Circle {
            radius,
            direction,
            turns,
            ..
        } if turns.fract() == 0.0 && *turns != 0.0 => Ok(Circle {
            radius: *radius,
            direction: direction.clone(),
            turns: *turns,
        }),
        _ => Err(Error::Invalid(
            "contour must be a closed circle with a nonzero whole number of turns".into(),
        )),
    }
}

/// `h -> f(zeta) (D q(zeta).h)` with `q` a primitive of `(zeta - a)^m`.
struct Kernel<'a> {
    f: &'a Phrase,
    q: Phrase,
}

impl<'a> Kernel<'a> {
    fn new(f: &'a Phrase, a: &CDNumber, m: i32) -> Kernel<'a> {
        let q = if m == -1 {
            Phrase::ln(a)
        } else {
            Phrase::var(Var::Z, a, m + 1).scale(1.0 / (m as f64 + 1.0))
        };
        Kernel { f, q }
    }
}

impl OperatorIntegrand for Kernel<'_> {
    fn level(&self) -> AlgebraLevel {
        self.f.level()
    }

    fn apply(&self, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
        let fz = self.f.evaluate(z)?;
        let dq = self.q.differential(z, h, Differential::Z)?;
        Ok(&fz * &dq)
    }
}

/// `(2 pi n)^-1 oint_psi f(zeta) (zeta - a)^m dzeta`.
fn kernel_integral(
    f: &Phrase,
    a: &CDNumber,
    m: i32,
    psi: &Path,
    circle: &Circle,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let mut r = line_integral_op(&Kernel::new(f, a, m), psi, opts)?;
    check_converged(&r)?;
    let norm = 1.0 / (2.0 * PI * circle.turns);
    r.value = r.value.scale(norm);
    r.est_error *= norm.abs();
    Ok(r)
}

/// `Value` when right-multiplying by `M*` recovers coefficients: `r <= 3`
/// (alternative algebras) or every constant of `f` commutes with `M`.
fn mode_for(f: &Phrase, m: &CDNumber) -> Mode {
    if f.level().r() <= 3 {
        return Mode::Value;
    }
    let in_plane = f.constants().iter().all(|c| {
        let off = &c.im() - &m.scale(c.dot(m));
        off.norm() <= 1e-12 * c.norm()
    });
    if in_plane {
        Mode::Value
    } else {
        Mode::Functional
    }
}

fn recover(value: &CDNumber, m: &CDNumber, mode: Mode) -> Option<CDNumber> {
    (mode == Mode::Value).then(|| value * &m.conj())
}

/// `(2 pi)^-1 oint_psi f(zeta)(zeta - z)^-1 dzeta`, which equals `f(z) M`
/// for `z` in the disc of `psi` within its own plane.
pub fn cauchy_eval(f: &Phrase, z: &CDNumber, psi: &Path, opts: &QuadratureOptions) -> Result<ContourValue> {
    cauchy_derivative(f, z, 0, psi, opts)
}

/// `k! (2 pi)^-1 oint_psi f(zeta)(zeta - z)^{-k-1} dzeta`.
pub fn cauchy_derivative(
    f: &Phrase,
    z: &CDNumber,
    k: u32,
    psi: &Path,
    opts: &QuadratureOptions,
) -> Result<ContourValue> {
    same_level(f.level(), psi.level())?;
    same_level(z.level(), psi.level())?;
    let c = circle_of(psi)?;
    let spacing = 2.0 * PI * c.radius * c.turns.abs() / opts.max_knots as f64;
    let d = psi.distance_to(z)?;
    if d < 10.0 * spacing {
        return Err(Error::Accuracy(format!(
            "point is {d:e} from the contour, below ten knot spacings"
        )));
    }
    let m = -(k as i32) - 1;
    let r = kernel_integral(f, z, m, psi, &c, opts)?;
    let fact: f64 = (1..=k).map(f64::from).product();
    let value = r.value.scale(fact);
    let mode = mode_for(f, &c.direction);
    Ok(ContourValue {
        recovered: recover(&value, &c.direction, mode),
        value,
        est_error: r.est_error * fact,
        mode,
    })
}

/// `c_k = (2 pi)^-1 oint_psi f(zeta)(zeta - a)^{-k-1} dzeta` for
/// `k = 0..count`, times `M*` in value mode. `psi` should be centred at `a`.
pub fn taylor_coeffs(
    f: &Phrase,
    a: &CDNumber,
    count: usize,
    psi: &Path,
    opts: &QuadratureOptions,
) -> Result<Coefficients> {
    same_level(f.level(), psi.level())?;
    same_level(a.level(), psi.level())?;
    let c = circle_of(psi)?;
    coefficients(f, a, 0, count as i32 - 1, &[psi.clone()], &c, opts)
}

/// Laurent coefficients `c_k`, `k_min..=k_max`, on the annulus
/// `rho_inner < |z - a| < rho_outer` in the plane of `direction`. They are
/// computed on two interior radii; disagreement means the annulus is not
/// pole free.
#[allow(clippy::too_many_arguments)]
pub fn laurent_coeffs(
    f: &Phrase,
    a: &CDNumber,
    k_min: i32,
    k_max: i32,
    rho_inner: f64,
    rho_outer: f64,
    direction: &CDNumber,
    opts: &QuadratureOptions,
) -> Result<Coefficients> {
    same_level(f.level(), a.level())?;
    if k_min > 0 || k_max < 0 {
        return Err(Error::Invalid(format!("need k_min <= 0 <= k_max, got {k_min}..{k_max}")));
    }
    if !(0.0 < rho_inner && rho_inner < rho_outer) {
        return Err(Error::Invalid(format!(
            "need 0 < rho_inner < rho_outer, got {rho_inner}, {rho_outer}"
        )));
    }
    let w = rho_outer - rho_inner;
    let paths = [
        Path::circle(a, rho_inner + w / 3.0, direction, 1.0)?,
        Path::circle(a, rho_inner + 2.0 * w / 3.0, direction, 1.0)?,
    ];
    let c = circle_of(&paths[0])?;
    coefficients(f, a, k_min, k_max, &paths, &c, opts)
}

fn coefficients(
    f: &Phrase,
    a: &CDNumber,
    k_min: i32,
    k_max: i32,
    paths: &[Path],
    circle: &Circle,
    opts: &QuadratureOptions,
) -> Result<Coefficients> {
    let mode = mode_for(f, &circle.direction);
    let mut coeffs = Vec::new();
    let mut est: f64 = 0.0;
    for k in k_min..=k_max {
        let mut vals = Vec::new();
        for p in paths {
            let c = circle_of(p)?;
            let r = kernel_integral(f, a, -k - 1, p, &c, opts)?;
            est = est.max(r.est_error);
            vals.push(r.value);
        }
        for v in &vals[1..] {
            let gap = v.distance(&vals[0]);
            if gap > 100.0 * opts.tol * (1.0 + vals[0].norm()) {
                return Err(Error::Domain(format!(
                    "coefficient c_{k} changes by {gap:e} across the annulus; \
                     f has a pole there or is not holomorphic in the contour plane"
                )));
            }
        }
        let v = &vals[0];
        coeffs.push(recover(v, &circle.direction, mode).unwrap_or_else(|| v.clone()));
    }
    Ok(Coefficients {
        k_min,
        coeffs,
        est_error: est,
        mode,
    })
}

fn classify_poles(poles: &[CDNumber], psi: &Path) -> Result<Vec<f64>> {
    poles
        .iter()
        .map(|p| {
            same_level(p.level(), psi.level())?;
            let d = psi.distance_to(p)?;
            if d <= 1e-9 * (1.0 + p.norm()) {
                return Err(Error::Pole { distance: d });
            }
            Ok(d)
        })
        .collect()
}

/// Radius of a small circle about pole `j` that stays clear of the others.
fn isolation_radius(poles: &[CDNumber], j: usize, cap: f64) -> f64 {
    let mut r = cap;
    for (i, q) in poles.iter().enumerate() {
        if i != j {
            r = r.min(0.5 * q.distance(&poles[j]));
        }
    }
    r
}

/// Compares `oint_psi f dz` with `2 pi sum_j res(p_j, f) In(p_j, psi)`.
pub fn residue_theorem_check(
    f: &Phrase,
    poles: &[CDNumber],
    psi: &Path,
    opts: &QuadratureOptions,
) -> Result<ContourReport> {
    same_level(f.level(), psi.level())?;
    let dists = classify_poles(poles, psi)?;
    let lhs = line_integral(f, psi, opts)?;
    check_converged(&lhs)?;
    let mut rhs = CDNumber::zero(f.level());
    let mut est = lhs.est_error;
    for (j, p) in poles.iter().enumerate() {
        let idx = ar_index(p, psi, opts.tol * 1e-3)?.value;
        if idx.norm() < 0.5 {
            continue;
        }
        let rho = isolation_radius(poles, j, 0.5 * dists[j]).min(1.0);
        let res = residue(f, p, &idx, rho, opts)?;
        rhs += &res.value.scale(2.0 * PI);
        est += 2.0 * PI * res.est_error;
    }
    Ok(ContourReport::new(lhs.value, rhs, est, Mode::Value))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidueSum {
    pub finite: CDNumber,
    pub at_infinity: CDNumber,
    /// `|finite + at_infinity|`.
    pub total: f64,
}

pub const INFINITY_RADIUS: f64 = 1e3;

/// `sum_j res(p_j, f) M` plus the residue at infinity, taken over a circle of
/// radius `1e3` with reversed orientation.
pub fn sum_residues_check(
    f: &Phrase,
    poles: &[CDNumber],
    m: &CDNumber,
    opts: &QuadratureOptions,
) -> Result<ResidueSum> {
    same_level(f.level(), m.level())?;
    let mut finite = CDNumber::zero(f.level());
    for (j, p) in poles.iter().enumerate() {
        same_level(p.level(), f.level())?;
        let rho = isolation_radius(poles, j, 0.5);
        finite += &residue(f, p, m, rho, opts)?.value;
    }
    let origin = CDNumber::zero(f.level());
    let big = Path::circle(&origin, INFINITY_RADIUS, m, -1.0)?;
    let r = line_integral(f, &big, opts)?;
    check_converged(&r)?;
    let at_infinity = r.value.scale(m.norm() / (2.0 * PI));
    Ok(ResidueSum {
        total: (&finite + &at_infinity).norm(),
        finite,
        at_infinity,
    })
}

/// Compares `In(0; f o gamma)` with `sum_a order(a) In(a; gamma)`.
pub fn argument_principle(
    f: &Phrase,
    gamma: &Path,
    zeros: &[(CDNumber, i32)],
    tol: f64,
) -> Result<ContourReport> {
    same_level(f.level(), gamma.level())?;
    let level = f.level();
    let image = {
        let f = f.clone();
        let g = gamma.clone();
        Path::parametric(level, move |t| f.evaluate(&g.sample(t)?))
    };
    let lhs = ar_index(&CDNumber::zero(level), &image, tol)?;
    let mut rhs = CDNumber::zero(level);
    let mut est = lhs.est_error;
    for (a, order) in zeros {
        let r = ar_index(a, gamma, tol)?;
        rhs += &r.value.scale(*order as f64);
        est += r.est_error * order.unsigned_abs() as f64;
    }
    Ok(ContourReport::new(lhs.value, rhs, est, Mode::Value))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iter: 100,
            tol: 1e-10,
            restarts: 16,
            seed: 42,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootResult {
    pub root: CDNumber,
    pub residual: f64,
    pub iterations: usize,
    /// Restarts used beyond the initial seed.
    pub restarts: usize,
}

/// Damped Newton on the real-coordinate map of `p`, with Armijo
/// backtracking on `|p|^2`, a Levenberg-Marquardt fallback and random
/// restarts in the ball `|z| <= 1 + coefficient mass`.
pub fn find_root(p: &Phrase, seed: &CDNumber, opts: &RootOptions) -> Result<RootResult> {
    same_level(p.level(), seed.level())?;
    if !p.has_var(Var::Z) {
        return Err(Error::Invalid("polynomial has no z term".into()));
    }
    if p.has_var(Var::Zc) {
        return Err(Error::Unsupported("root finding needs a phrase in z only".into()));
    }
    let level = p.level();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ball = 1.0 + p.coefficient_mass();
    let mut best: Option<(CDNumber, f64)> = None;
    let mut total_iters = 0;
    for attempt in 0..=opts.restarts {
        let start = if attempt == 0 {
            seed.clone()
        } else {
            let dir = CDNumber::random(level, &mut rng);
            let u: f64 = rng.gen();
            dir.scale(ball * u / dir.norm().max(1e-300))
        };
        let (z, res, iters) = newton(p, start, opts);
        total_iters += iters;
        if best.as_ref().is_none_or(|(_, b)| res < *b) {
            best = Some((z.clone(), res));
        }
        if res <= opts.tol {
            return Ok(RootResult {
                root: z,
                residual: res,
                iterations: total_iters,
                restarts: attempt,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: total_iters,
        residual: best.map_or(f64::INFINITY, |b| b.1),
    })
}

fn newton(p: &Phrase, mut z: CDNumber, opts: &RootOptions) -> (CDNumber, f64, usize) {
    let level = z.level();
    let dim = level.dim();
    let eval = |z: &CDNumber| p.evaluate(z).ok().filter(|v| v.norm().is_finite());
    let Some(mut r) = eval(&z) else {
        return (z, f64::INFINITY, 0);
    };
    let basis: Vec<CDNumber> = (0..dim).map(|k| CDNumber::basis(level, k).unwrap()).collect();
    for it in 0..opts.max_iter {
        let phi = r.norm_sqr();
        if phi.sqrt() <= opts.tol {
            return (z, phi.sqrt(), it);
        }
        let mut jac = DMatrix::<f64>::zeros(dim, dim);
        for (k, e) in basis.iter().enumerate() {
            let Ok(col) = p.derivative_apply(&z, e) else {
                return (z, phi.sqrt(), it);
            };
            for (i, v) in col.coeffs().iter().enumerate() {
                jac[(i, k)] = *v;
            }
        }
        let rv = DVector::from_column_slice(r.coeffs());
        let mut steps = Vec::new();
        if let Some(d) = jac.clone().lu().solve(&(-&rv)) {
            if d.iter().all(|x| x.is_finite()) {
                steps.push(d);
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &rv;
        let scale = jtj.diagonal().max().max(1e-12);
        for lambda in [1e-6, 1e-3, 1e-1, 1.0, 10.0] {
            let a = &jtj + DMatrix::identity(dim, dim) * (lambda * scale);
            if let Some(d) = a.cholesky().map(|c| c.solve(&(-&jtr))) {
                steps.push(d);
            }
        }
        let mut moved = false;
        'search: for d in &steps {
            let dz = CDNumber::from_coeffs(level, d.iter().copied().collect()).unwrap();
            let mut alpha = 1.0;
            while alpha > 1e-10 {
                let cand = &z + &dz.scale(alpha);
                if let Some(rc) = eval(&cand) {
                    if rc.norm_sqr() <= (1.0 - 1e-4 * alpha) * phi {
                        z = cand;
                        r = rc;
                        moved = true;
                        break 'search;
                    }
                }
                alpha *= 0.5;
            }
        }
        if !moved {
            return (z, phi.sqrt(), it + 1);
        }
    }
    let res = r.norm();
    (z, res, opts.max_iter)
}
