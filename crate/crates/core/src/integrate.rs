//! Paths, partitions and the noncommutative line integral
//! `int_gamma f dz = lim sum_k f^(z_{k+1}).(z_{k+1} - z_k)`.
//!
//! The integrand is an operator `h -> f^(z).h` (the differential of a
//! primitive of `f`) applied to each partition increment at the right
//! endpoint. The sums converge like `1/N`; [`line_integral`] doubles `N`
//! and, by default, Richardson-extrapolates the sequence of sums.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraLevel, CDNumber};
use crate::error::{Error, Result};
use crate::expr::{Differential, Phrase};
use crate::transcendental::{exp, polar_decompose};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_KNOTS: usize = 1 << 20;
pub const DEFAULT_MIN_KNOTS: usize = 64;

type Sampler = Arc<dyn Fn(f64) -> Result<CDNumber> + Send + Sync>;

/// A rectifiable curve parametrised over `[0, 1]`.
#[derive(Clone)]
pub enum Path {
    /// `center + radius * exp(2 pi t turns direction)`.
    Circle {
        center: CDNumber,
        radius: f64,
        direction: CDNumber,
        turns: f64,
    },
    /// Straight segments through `points`, parametrised by arclength.
    Polyline {
        points: Vec<CDNumber>,
        /// Cumulative arclength fractions, `breaks[0] = 0`, last `= 1`.
        breaks: Vec<f64>,
    },
    Parametric {
        level: AlgebraLevel,
        sampler: Sampler,
    },
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Path::Circle {
                center,
                radius,
                direction,
                turns,
            } => f
                .debug_struct("Circle")
                .field("center", center)
                .field("radius", radius)
                .field("direction", direction)
                .field("turns", turns)
                .finish(),
            Path::Polyline { points, .. } => f.debug_struct("Polyline").field("points", points).finish(),
            Path::Parametric { level, .. } => f.debug_struct("Parametric").field("level", level).finish(),
        }
    }
}

/// JSON form of a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PathSpec {
    Circle {
        center: CDNumber,
        radius: f64,
        direction: CDNumber,
        #[serde(default = "one_turn")]
        turns: f64,
    },
    Polyline {
        points: Vec<CDNumber>,
    },
}

fn one_turn() -> f64 {
    1.0
}

impl PathSpec {
    pub fn build(&self) -> Result<Path> {
        match self {
            PathSpec::Circle {
                center,
                radius,
                direction,
                turns,
            } => Path::circle(center, *radius, direction, *turns),
            PathSpec::Polyline { points } => Path::polyline(points.clone()),
        }
    }
}

impl Path {
    /// Circle about `center` in the plane `R + R direction`; `direction` must
    /// be pure imaginary and is normalised.
    pub fn circle(center: &CDNumber, radius: f64, direction: &CDNumber, turns: f64) -> Result<Path> {
        if center.level() != direction.level() {
            return Err(Error::LevelMismatch {
                left: center.level().r(),
                right: direction.level().r(),
            });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Invalid(format!("circle radius must be positive, got {radius}")));
        }
        if !turns.is_finite() {
            return Err(Error::Invalid("circle turns must be finite".into()));
        }
        let n = direction.norm();
        if direction.re().abs() > 1e-12 * n.max(1.0) || n == 0.0 || !n.is_finite() {
            return Err(Error::Invalid(
                "circle direction must be a nonzero pure imaginary element".into(),
            ));
        }
        Ok(Path::Circle {
            center: center.clone(),
            radius,
            direction: direction.im().scale(1.0 / n),
            turns,
        })
    }

    pub fn polyline(points: Vec<CDNumber>) -> Result<Path> {
        if points.len() < 2 {
            return Err(Error::Invalid("polyline needs at least two points".into()));
        }
        let level = points[0].level();
        if let Some(p) = points.iter().find(|p| p.level() != level) {
            return Err(Error::LevelMismatch {
                left: level.r(),
                right: p.level().r(),
            });
        }
        let mut cum = vec![0.0];
        for w in points.windows(2) {
            cum.push(cum.last().unwrap() + w[1].distance(&w[0]));
        }
        let total = *cum.last().unwrap();
        let breaks = if total > 0.0 {
            cum.iter().map(|c| c / total).collect()
        } else {
            (0..points.len()).map(|i| i as f64 / (points.len() - 1) as f64).collect()
        };
        Ok(Path::Polyline { points, breaks })
    }

    /// Closed axis-parallel square `c + s(+-1 +- u)` in the plane `R + R u`.
    pub fn square(center: &CDNumber, half_side: f64, u: &CDNumber) -> Result<Path> {
        let lv = center.level();
        let one = CDNumber::one(lv).scale(half_side);
        let uu = u.scale(half_side / u.norm());
        let pts = vec![
            center + &(&one - &uu),
            center + &(&one + &uu),
            center + &(&uu - &one),
            center - &(&one + &uu),
            center + &(&one - &uu),
        ];
        Path::polyline(pts)
    }

    pub fn parametric(
        level: AlgebraLevel,
        sampler: impl Fn(f64) -> Result<CDNumber> + Send + Sync + 'static,
    ) -> Path {
        Path::Parametric {
            level,
            sampler: Arc::new(sampler),
        }
    }

    pub fn level(&self) -> AlgebraLevel {
        match self {
            Path::Circle { center, .. } => center.level(),
            Path::Polyline { points, .. } => points[0].level(),
            Path::Parametric { level, .. } => *level,
        }
    }

    pub fn spec(&self) -> Option<PathSpec> {
        match self {
            Path::Circle {
                center,
                radius,
                direction,
                turns,
            } => Some(PathSpec::Circle {
                center: center.clone(),
                radius: *radius,
                direction: direction.clone(),
                turns: *turns,
            }),
            Path::Polyline { points, .. } => Some(PathSpec::Polyline {
                points: points.clone(),
            }),
            Path::Parametric { .. } => None,
        }
    }

    pub fn sample(&self, t: f64) -> Result<CDNumber> {
        match self {
            Path::Circle {
                center,
                radius,
                direction,
                turns,
            } => Ok(center + &exp(&direction.scale(2.0 * PI * t * turns)).scale(*radius)),
            Path::Polyline { points, breaks } => {
                let t = t.clamp(0.0, 1.0);
                let i = match breaks.iter().rposition(|&b| b <= t) {
                    Some(i) if i + 1 < points.len() => i,
                    _ => points.len() - 2,
                };
                let w = breaks[i + 1] - breaks[i];
                let s = if w > 0.0 { (t - breaks[i]) / w } else { 0.0 };
                Ok(&points[i].scale(1.0 - s) + &points[i + 1].scale(s))
            }
            Path::Parametric { sampler, .. } => sampler(t),
        }
    }

    pub fn start(&self) -> Result<CDNumber> {
        self.sample(0.0)
    }

    pub fn end(&self) -> Result<CDNumber> {
        self.sample(1.0)
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Path::Circle { turns, .. } => turns.fract() == 0.0,
            _ => match (self.start(), self.end()) {
                (Ok(a), Ok(b)) => a.distance(&b) <= 1e-12 * (1.0 + a.norm()),
                _ => false,
            },
        }
    }

    /// `gamma(1 - t)`.
    pub fn reversed(&self) -> Path {
        match self {
            Path::Circle {
                center,
                radius,
                direction,
                turns,
            } if turns.fract() == 0.0 => Path::Circle {
                center: center.clone(),
                radius: *radius,
                direction: direction.clone(),
                turns: -turns,
            },
            Path::Polyline { points, .. } => {
                Path::polyline(points.iter().rev().cloned().collect()).expect("valid polyline")
            }
            other => {
                let p = other.clone();
                Path::parametric(other.level(), move |t| p.sample(1.0 - t))
            }
        }
    }

    /// The piece over parameters `[a, b]`, reparametrised to `[0, 1]`.
    pub fn piece(&self, a: f64, b: f64) -> Path {
        let p = self.clone();
        Path::parametric(self.level(), move |t| p.sample(a + (b - a) * t))
    }

    /// Nested partitions: refinement level `j` has about `base * 2^j`
    /// intervals. Polylines get `max(1, ceil(base L_i / L)) 2^j` intervals
    /// on segment `i`.
    pub fn partition(&self, base: usize, j: u32) -> Partition {
        let mult = 1usize << j;
        match self {
            Path::Polyline { breaks, .. } => {
                let mut knots = vec![0.0];
                for w in breaks.windows(2) {
                    let len = w[1] - w[0];
                    if len <= 0.0 {
                        continue;
                    }
                    let m = ((base as f64 * len).ceil() as usize).max(1) * mult;
                    for k in 1..=m {
                        knots.push(if k == m { w[1] } else { w[0] + len * k as f64 / m as f64 });
                    }
                }
                if knots.len() == 1 {
                    return Partition::uniform(base * mult);
                }
                let last = knots.len() - 1;
                knots[last] = 1.0;
                Partition { knots }
            }
            _ => Partition::uniform(base * mult),
        }
    }

    /// Distance from `p` to the curve; exact for circles with at least one
    /// full turn and for polylines, sampled otherwise.
    pub fn distance_to(&self, p: &CDNumber) -> Result<f64> {
        match self {
            Path::Circle {
                center,
                radius,
                direction,
                turns,
            } if turns.abs() >= 1.0 => {
                let d = p - center;
                let a = d.re();
                let b = d.dot(direction);
                let along = (a * a + b * b).sqrt();
                let perp2 = (d.norm_sqr() - along * along).max(0.0);
                Ok(((along - radius).powi(2) + perp2).sqrt())
            }
            Path::Polyline { points, .. } => Ok(points
                .windows(2)
                .map(|w| segment_distance(p, &w[0], &w[1]))
                .fold(f64::INFINITY, f64::min)),
            _ => {
                let n = 4096;
                let mut best = f64::INFINITY;
                for k in 0..=n {
                    best = best.min(self.sample(k as f64 / n as f64)?.distance(p));
                }
                Ok(best)
            }
        }
    }
}

fn segment_distance(p: &CDNumber, a: &CDNumber, b: &CDNumber) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return p.distance(a);
    }
    let s = ((p - a).dot(&ab) / l2).clamp(0.0, 1.0);
    p.distance(&(a + &ab.scale(s)))
}

/// Increasing knots `0 = c_0 < ... < c_t = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Partition> {
        if knots.len() < 2 || knots[0] != 0.0 || *knots.last().unwrap() != 1.0 {
            return Err(Error::Invalid("partition must run from 0 to 1".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Invalid("partition knots must be strictly increasing".into()));
        }
        Ok(Partition { knots })
    }

    pub fn uniform(intervals: usize) -> Partition {
        let n = intervals.max(1);
        let mut knots: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
        knots[n] = 1.0;
        Partition { knots }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn intervals(&self) -> usize {
        self.knots.len() - 1
    }

    /// Largest spacing `|P|`.
    pub fn norm(&self) -> f64 {
        self.knots.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
    }
}

pub fn total_variation(gamma: &Path, partition: &Partition) -> Result<f64> {
    let pts = sample_all(gamma, partition)?;
    Ok(pts.windows(2).map(|w| w[1].distance(&w[0])).sum())
}

fn sample_all(gamma: &Path, partition: &Partition) -> Result<Vec<CDNumber>> {
    partition.knots.iter().map(|&t| gamma.sample(t)).collect()
}

/// An operator-valued integrand `h -> f^(z).h`, real-linear in `h`.
pub trait OperatorIntegrand {
    fn level(&self) -> AlgebraLevel;
    fn apply(&self, z: &CDNumber, h: &CDNumber) -> Result<CDNumber>;
}

/// The hatted integrand of a phrase: `D_z g` for its primitive `g`.
#[derive(Clone, Debug)]
pub struct HatIntegrand {
    primitive: Phrase,
}

impl HatIntegrand {
    pub fn new(f: &Phrase) -> Result<HatIntegrand> {
        Ok(HatIntegrand {
            primitive: f.primitive()?,
        })
    }

    pub fn primitive(&self) -> &Phrase {
        &self.primitive
    }
}

impl OperatorIntegrand for HatIntegrand {
    fn level(&self) -> AlgebraLevel {
        self.primitive.level()
    }

    fn apply(&self, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
        self.primitive.differential(z, h, Differential::Z)
    }
}

/// `sum_k f^(z_{k+1}).(z_{k+1} - z_k)`.
pub fn integral_sum(f: &Phrase, gamma: &Path, partition: &Partition) -> Result<CDNumber> {
    integral_sum_op(&HatIntegrand::new(f)?, gamma, partition)
}

pub fn integral_sum_op(
    op: &dyn OperatorIntegrand,
    gamma: &Path,
    partition: &Partition,
) -> Result<CDNumber> {
    stieltjes_sum(op, gamma, partition, None)
}

fn stieltjes_sum(
    op: &dyn OperatorIntegrand,
    gamma: &Path,
    partition: &Partition,
    q: Option<&Phrase>,
) -> Result<CDNumber> {
    check_level(op.level(), gamma.level())?;
    let pts = sample_all(gamma, partition)?;
    let qs = match q {
        None => None,
        Some(q) => Some(pts.iter().map(|z| q.evaluate(z)).collect::<Result<Vec<_>>>()?),
    };
    let mut acc = CDNumber::zero(op.level());
    for k in 0..pts.len() - 1 {
        let dz = match &qs {
            None => &pts[k + 1] - &pts[k],
            Some(qs) => &qs[k + 1] - &qs[k],
        };
        acc += &op.apply(&pts[k + 1], &dz)?;
    }
    Ok(acc)
}

fn check_level(a: AlgebraLevel, b: AlgebraLevel) -> Result<()> {
    if a != b {
        return Err(Error::LevelMismatch {
            left: a.r(),
            right: b.r(),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extrapolation {
    /// Return the finest sum as is.
    None,
    /// Neville table on `h = 1/N` over the doubling sequence.
    Richardson,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub tol: f64,
    pub max_knots: usize,
    pub min_knots: usize,
    pub extrapolation: Extrapolation,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tol: DEFAULT_TOL,
            max_knots: DEFAULT_MAX_KNOTS,
            min_knots: DEFAULT_MIN_KNOTS,
            extrapolation: Extrapolation::Richardson,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tol(tol: f64) -> Self {
        QuadratureOptions {
            tol,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Invalid(format!("tol must be positive, got {}", self.tol)));
        }
        if self.min_knots == 0 || self.max_knots < self.min_knots {
            return Err(Error::Invalid(format!(
                "max_knots ({}) must be at least min_knots ({})",
                self.max_knots, self.min_knots
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: CDNumber,
    /// Difference between the last two estimates.
    pub est_error: f64,
    /// Number of doublings performed.
    pub refinements: usize,
    pub converged: bool,
}

const RICHARDSON_COLUMNS: usize = 6;

pub fn line_integral(f: &Phrase, gamma: &Path, opts: &QuadratureOptions) -> Result<QuadratureResult> {
    line_integral_op(&HatIntegrand::new(f)?, gamma, opts)
}

pub fn line_integral_op(
    op: &dyn OperatorIntegrand,
    gamma: &Path,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    refine(opts, |j| stieltjes_sum(op, gamma, &gamma.partition(opts.min_knots, j), None), gamma)
}

/// `sum_k f^(z_{k+1}).(q(z_{k+1}) - q(z_k))`, refined like [`line_integral`].
pub fn stieltjes_integral(
    f: &Phrase,
    q: &Phrase,
    gamma: &Path,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let op = HatIntegrand::new(f)?;
    check_level(q.level(), gamma.level())?;
    refine(opts, |j| stieltjes_sum(&op, gamma, &gamma.partition(opts.min_knots, j), Some(q)), gamma)
}

fn refine(
    opts: &QuadratureOptions,
    mut sum_at: impl FnMut(u32) -> Result<CDNumber>,
    gamma: &Path,
) -> Result<QuadratureResult> {
    opts.validate()?;
    // rows of the Neville table, newest last
    let mut prev_row: Vec<CDNumber> = Vec::new();
    let mut prev_best: Option<CDNumber> = None;
    let mut est = f64::INFINITY;
    let mut j = 0u32;
    loop {
        let s = sum_at(j)?;
        let mut row = vec![s];
        if opts.extrapolation == Extrapolation::Richardson {
            for m in 1..=prev_row.len().min(RICHARDSON_COLUMNS) {
                let f = (1u64 << m) as f64 - 1.0;
                let t = &row[m - 1] + &(&row[m - 1] - &prev_row[m - 1]).scale(1.0 / f);
                row.push(t);
            }
        }
        let best = row.last().unwrap().clone();
        if let Some(p) = &prev_best {
            est = best.distance(p);
        }
        let converged = j >= 2 && est < opts.tol;
        let next_knots = gamma.partition(opts.min_knots, j + 1).intervals();
        if converged || next_knots > opts.max_knots {
            return Ok(QuadratureResult {
                value: best,
                est_error: est,
                refinements: j as usize,
                converged,
            });
        }
        prev_best = Some(best);
        prev_row = row;
        j += 1;
    }
}

/// Continuous branch `Ln w = ln|w| + theta N` followed along a path.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchState {
    pub accumulated_arg: f64,
    pub current_direction: CDNumber,
}

impl BranchState {
    /// Principal branch at `w`.
    pub fn start(w: &CDNumber) -> BranchState {
        let p = polar_decompose(w);
        BranchState {
            accumulated_arg: p.theta,
            current_direction: p.direction,
        }
    }

    pub fn log_value(&self, w: &CDNumber) -> CDNumber {
        &CDNumber::real(w.level(), w.norm().ln()) + &self.current_direction.scale(self.accumulated_arg)
    }

    /// The representative at `w` nearest to this state.
    pub fn continue_to(&self, w: &CDNumber) -> BranchState {
        let p = polar_decompose(w);
        let mu = w.im().norm();
        let prev = self.accumulated_arg;
        let nearest = |base: f64| base + 2.0 * PI * ((prev - base) / (2.0 * PI)).round();
        if mu <= 1e-12 * p.rho {
            // on the real axis every direction represents w; keep ours
            return BranchState {
                accumulated_arg: nearest(p.theta),
                current_direction: self.current_direction.clone(),
            };
        }
        if prev.abs() < 1e-9 {
            return BranchState {
                accumulated_arg: nearest(p.theta),
                current_direction: p.direction,
            };
        }
        let s = if p.direction.dot(&self.current_direction) < 0.0 { -1.0 } else { 1.0 };
        BranchState {
            accumulated_arg: nearest(s * p.theta),
            current_direction: p.direction.scale(s),
        }
    }

    fn imaginary(&self) -> CDNumber {
        self.current_direction.scale(self.accumulated_arg)
    }
}

const MIN_STEP: f64 = 1e-12;

/// `int_gamma dLn(z - center)` by telescoping the continuously tracked
/// branch of `Ln(gamma(t) - center)`. Steps are halved until the angle and
/// the imaginary part move by less than `pi/2`. The result at `N` and `2N`
/// starting steps must agree to `tol`.
pub fn log_integral(center: &CDNumber, gamma: &Path, tol: f64) -> Result<QuadratureResult> {
    check_level(center.level(), gamma.level())?;
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("tol must be positive, got {tol}")));
    }
    let mut n = 64usize;
    let mut prev: Option<CDNumber> = None;
    let mut refinements = 0;
    loop {
        let v = log_integral_steps(center, gamma, n)?;
        if let Some(p) = prev {
            let est = v.distance(&p);
            if est < tol {
                return Ok(QuadratureResult {
                    value: v,
                    est_error: est,
                    refinements,
                    converged: true,
                });
            }
            if n >= 1 << 16 {
                return Err(Error::StepControl(format!(
                    "branch tracking does not settle (difference {est:e} at {n} steps)"
                )));
            }
        }
        prev = Some(v);
        n *= 2;
        refinements += 1;
    }
}

fn log_integral_steps(center: &CDNumber, gamma: &Path, n: usize) -> Result<CDNumber> {
    let w_at = |t: f64| -> Result<CDNumber> {
        let w = &gamma.sample(t)? - center;
        if w.norm() <= 1e-14 * (1.0 + center.norm()) {
            return Err(Error::StepControl(format!("path passes through {center}")));
        }
        Ok(w)
    };
    // start where the direction is determined and track both ways
    let knots = gamma.partition(n, 0);
    let ts = knots.knots();
    let off_axis = |w: &CDNumber| w.im().norm() > 1e-12 * w.norm();
    let mut j = 0;
    for (k, &t) in ts.iter().enumerate() {
        if off_axis(&w_at(t)?) {
            j = k;
            break;
        }
    }
    let origin = BranchState::start(&w_at(ts[j])?);
    let mut fwd = origin.clone();
    for k in j..ts.len() - 1 {
        fwd = advance(&w_at, ts[k], ts[k + 1], fwd)?;
    }
    let mut bwd = origin;
    for k in (0..j).rev() {
        bwd = advance(&w_at, ts[k + 1], ts[k], bwd)?;
    }
    Ok(fwd.log_value(&w_at(1.0)?) - bwd.log_value(&w_at(0.0)?))
}

fn advance(
    w_at: &impl Fn(f64) -> Result<CDNumber>,
    t0: f64,
    t1: f64,
    state: BranchState,
) -> Result<BranchState> {
    let next = state.continue_to(&w_at(t1)?);
    let jump = (next.accumulated_arg - state.accumulated_arg).abs();
    let drift = next.imaginary().distance(&state.imaginary());
    if (jump < PI / 2.0 && drift < PI / 2.0) || (t1 - t0).abs() < MIN_STEP {
        return Ok(next);
    }
    let mid = 0.5 * (t0 + t1);
    let s = advance(w_at, t0, mid, state)?;
    advance(w_at, mid, t1, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lv(r: u32) -> AlgebraLevel {
        AlgebraLevel::new(r).unwrap()
    }

    fn e(l: AlgebraLevel, k: usize) -> CDNumber {
        CDNumber::basis(l, k).unwrap()
    }

    fn unit_circle(l: AlgebraLevel, k: usize, turns: f64) -> Path {
        Path::circle(&CDNumber::zero(l), 1.0, &e(l, k), turns).unwrap()
    }

    #[test]
    fn circle_samples() {
        let o = lv(3);
        let c = unit_circle(o, 2, 1.0);
        assert!(c.sample(0.25).unwrap().distance(&e(o, 2)) < 1e-15);
        assert!(c.sample(0.5).unwrap().distance(&CDNumber::real(o, -1.0)) < 1e-15);
        assert!(c.is_closed());
        assert!(!unit_circle(o, 2, 0.5).is_closed());
        assert!(Path::circle(&CDNumber::zero(o), 1.0, &CDNumber::one(o), 1.0).is_err());
        assert!(Path::circle(&CDNumber::zero(o), -1.0, &e(o, 1), 1.0).is_err());
    }

    #[test]
    fn total_variation_examples() {
        let o = lv(3);
        let tv = total_variation(&unit_circle(o, 1, 1.0), &Partition::uniform(4096)).unwrap();
        assert!((tv - 2.0 * PI).abs() < 1e-5);
        let a = e(o, 3);
        let b = &CDNumber::real(o, 2.0) + &e(o, 7);
        let seg = Path::polyline(vec![a.clone(), b.clone()]).unwrap();
        for p in [Partition::uniform(1), Partition::new(vec![0.0, 0.1, 0.7, 1.0]).unwrap()] {
            assert!((total_variation(&seg, &p).unwrap() - a.distance(&b)).abs() < 1e-15);
        }
        let still = Path::polyline(vec![a.clone(), a.clone()]).unwrap();
        assert_eq!(total_variation(&still, &Partition::uniform(10)).unwrap(), 0.0);
        let c = unit_circle(o, 4, 2.0);
        let coarse = total_variation(&c, &c.partition(64, 0)).unwrap();
        let fine = total_variation(&c, &c.partition(64, 3)).unwrap();
        assert!(coarse <= fine && fine <= 4.0 * PI);
    }

    #[test]
    fn partitions() {
        assert!(Partition::new(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(Partition::new(vec![0.1, 1.0]).is_err());
        let p = Partition::uniform(4);
        assert_eq!(p.norm(), 0.25);
        let o = lv(3);
        let sq = Path::square(&CDNumber::zero(o), 1.0, &e(o, 1)).unwrap();
        let p0 = sq.partition(64, 0);
        let p1 = sq.partition(64, 1);
        assert_eq!(p1.intervals(), 2 * p0.intervals());
        for k in p0.knots() {
            assert!(p1.knots().contains(k));
        }
        assert!(sq.is_closed());
    }

    #[test]
    fn sum_examples() {
        let o = lv(3);
        let one = parse("1", o).unwrap();
        let a = e(o, 3);
        let b = &CDNumber::real(o, 2.0) + &e(o, 5);
        let path = Path::polyline(vec![a.clone(), e(o, 6), b.clone()]).unwrap();
        let s = integral_sum(&one, &path, &path.partition(8, 0)).unwrap();
        assert!(s.distance(&(&b - &a)) < 1e-14);
        let inv = parse("z^-1", o).unwrap();
        let s = integral_sum(&inv, &unit_circle(o, 1, 1.0), &Partition::uniform(2048)).unwrap();
        assert!(s.distance(&e(o, 1).scale(2.0 * PI)) < 1e-2);
        let sq = Path::square(&CDNumber::zero(o), 1.0, &e(o, 3)).unwrap();
        let z2 = parse("z^2", o).unwrap();
        let s = integral_sum(&z2, &sq, &sq.partition(4096, 0)).unwrap();
        assert!(s.norm() < 1e-2);
    }

    #[test]
    fn loop_integral_of_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let opts = QuadratureOptions::default();
        for r in 2..=4 {
            let l = lv(r);
            let m = CDNumber::random_unit_imaginary(l, &mut rng);
            let f = parse("z^-1", l).unwrap();
            for n in 1..=3 {
                let mut vals = Vec::new();
                for rho in [0.5, 2.0] {
                    let c = Path::circle(&CDNumber::zero(l), rho, &m, n as f64).unwrap();
                    let res = line_integral(&f, &c, &opts).unwrap();
                    assert!(res.converged);
                    let want = m.scale(2.0 * PI * n as f64);
                    assert!(res.value.distance(&want) < 1e-5, "r={r} n={n} {}", res.value);
                    vals.push(res.value);
                }
                assert!(vals[0].distance(&vals[1]) < 2e-5);
            }
        }
    }

    #[test]
    fn raw_sums_converge_slowly() {
        let o = lv(3);
        let f = parse("z^-1", o).unwrap();
        let c = unit_circle(o, 1, 3.0);
        let opts = QuadratureOptions {
            extrapolation: Extrapolation::None,
            max_knots: 1 << 14,
            ..Default::default()
        };
        let res = line_integral(&f, &c, &opts).unwrap();
        assert!(!res.converged);
        let err = res.value.distance(&e(o, 1).scale(6.0 * PI));
        assert!(err > 1e-3 && err < 0.1);
    }

    #[test]
    fn polynomial_loops_vanish() {
        let o = lv(3);
        let opts = QuadratureOptions::default();
        let f = parse("e1*(z^3*e2) + (e4*z)*e5 - 3*z^2 + e7", o).unwrap();
        let c = Path::circle(&e(o, 2).scale(0.3), 1.5, &e(o, 6), 1.0).unwrap();
        assert!(line_integral(&f, &c, &opts).unwrap().value.norm() < 1e-6);
        let sq = Path::square(&e(o, 1), 0.7, &e(o, 3)).unwrap();
        assert!(line_integral(&f, &sq, &opts).unwrap().value.norm() < 1e-6);
    }

    #[test]
    fn homotopic_open_paths_agree() {
        let o = lv(3);
        let opts = QuadratureOptions::default();
        let f = parse("e2*(z^2*e3) + z*e5", o).unwrap();
        let a = CDNumber::real(o, -1.0);
        let b = &CDNumber::real(o, 1.0) + &e(o, 4);
        let p1 = Path::polyline(vec![a.clone(), b.clone()]).unwrap();
        let p2 = Path::polyline(vec![a.clone(), e(o, 2), e(o, 6), b.clone()]).unwrap();
        let i1 = line_integral(&f, &p1, &opts).unwrap();
        let i2 = line_integral(&f, &p2, &opts).unwrap();
        assert!(i1.value.distance(&i2.value) < 2e-6);
        // and both equal the primitive difference
        let g = f.primitive().unwrap();
        let exact = g.evaluate(&b).unwrap() - g.evaluate(&a).unwrap();
        assert!(i1.value.distance(&exact) < 1e-6);
    }

    #[test]
    fn linearity_reversal_additivity() {
        let o = lv(3);
        let opts = QuadratureOptions::default();
        let tol = opts.tol;
        let l1 = e(o, 3);
        let l2 = &CDNumber::real(o, 0.5) + &e(o, 6);
        let f1 = parse("z^-1", o).unwrap();
        let f2 = parse("(z - 0.2*e5)^-2*e1 + z^2", o).unwrap();
        let c = Path::circle(&CDNumber::zero(o), 1.0, &e(o, 5), 1.0).unwrap();
        let i1 = line_integral(&f1, &c, &opts).unwrap().value;
        let i2 = line_integral(&f2, &c, &opts).unwrap().value;
        let left = f1.left_mul(&l1).unwrap().add(&f2.left_mul(&l2).unwrap()).unwrap();
        let il = line_integral(&left, &c, &opts).unwrap().value;
        assert!(il.distance(&(&(&l1 * &i1) + &(&l2 * &i2))) < 3.0 * tol);
        let right = f1.right_mul(&l1).unwrap().add(&f2.right_mul(&l2).unwrap()).unwrap();
        let ir = line_integral(&right, &c, &opts).unwrap().value;
        assert!(ir.distance(&(&(&i1 * &l1) + &(&i2 * &l2))) < 3.0 * tol);

        let rev = line_integral(&f2, &c.reversed(), &opts).unwrap().value;
        assert!(rev.distance(&-line_integral(&f2, &c, &opts).unwrap().value) < 2.0 * tol);
        let open = Path::circle(&CDNumber::zero(o), 1.0, &e(o, 5), 0.7).unwrap();
        let whole = line_integral(&f2, &open, &opts).unwrap().value;
        let a = line_integral(&f2, &open.piece(0.0, 0.3), &opts).unwrap().value;
        let b = line_integral(&f2, &open.piece(0.3, 1.0), &opts).unwrap().value;
        assert!(whole.distance(&(a + b)) < 2.0 * tol);
        let open_rev = line_integral(&f2, &open.reversed(), &opts).unwrap().value;
        assert!(open_rev.distance(&-whole) < 2.0 * tol);
    }

    #[test]
    fn error_estimate_shrinks_with_refinement() {
        let o = lv(3);
        let f = parse("e1*(z - 0.1*e2)^-1*e3 + z^3", o).unwrap();
        let c = unit_circle(o, 2, 1.0);
        let op = HatIntegrand::new(&f).unwrap();
        let mut prev_diff = f64::INFINITY;
        let mut prev = integral_sum_op(&op, &c, &c.partition(64, 0)).unwrap();
        for j in 1..6 {
            let s = integral_sum_op(&op, &c, &c.partition(64, j)).unwrap();
            let d = s.distance(&prev);
            assert!(d <= prev_diff * 0.5 * 1.2, "j={j}: {d} vs {prev_diff}");
            prev_diff = d;
            prev = s;
        }
    }

    #[test]
    fn stieltjes_examples() {
        let o = lv(3);
        let opts = QuadratureOptions::default();
        let c = unit_circle(o, 1, 1.0);
        let f = parse("e2*z^2 + z^-1", o).unwrap();
        let z = parse("z", o).unwrap();
        let a = stieltjes_integral(&f, &z, &c, &opts).unwrap().value;
        let b = line_integral(&f, &c, &opts).unwrap().value;
        assert!(a.distance(&b) < 1e-12);
        let one = parse("1", o).unwrap();
        let q = parse("e3*z^3 + z^-2", o).unwrap();
        let sq = Path::square(&CDNumber::zero(o), 1.0, &e(o, 2)).unwrap();
        assert!(stieltjes_integral(&one, &q, &sq, &opts).unwrap().value.norm() < 1e-12);
        // dq = (2z + 1) dz in the plane of the circle: int z^-1 (2z + 1) dz = 2 pi M
        let inv = parse("z^-1", o).unwrap();
        let q = parse("z^2 + z", o).unwrap();
        let v = stieltjes_integral(&inv, &q, &c, &opts).unwrap().value;
        assert!(v.distance(&e(o, 1).scale(2.0 * PI)) < 1e-5);
        let fine = stieltjes_sum(&HatIntegrand::new(&inv).unwrap(), &c, &Partition::uniform(1 << 16), Some(&q)).unwrap();
        assert!(v.distance(&fine) < 1e-3);
    }

    #[test]
    fn log_integral_examples() {
        let o = lv(3);
        let tol = 1e-9;
        let v = log_integral(&CDNumber::zero(o), &unit_circle(o, 2, 1.0), tol).unwrap();
        assert!(v.value.distance(&e(o, 2).scale(2.0 * PI)) < 1e-12);
        let outside = Path::circle(&CDNumber::real(o, 3.0), 1.0, &e(o, 2), 1.0).unwrap();
        assert!(log_integral(&CDNumber::zero(o), &outside, tol).unwrap().value.norm() < 1e-12);
        let rev = log_integral(&CDNumber::zero(o), &unit_circle(o, 2, -1.0), tol).unwrap();
        assert!(rev.value.distance(&e(o, 2).scale(-2.0 * PI)) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for r in 2..=4 {
            let l = lv(r);
            for n in -2..=3 {
                let m = CDNumber::random_unit_imaginary(l, &mut rng);
                let a = CDNumber::random(l, &mut rng);
                let c = Path::circle(&a, 0.5, &m, n as f64).unwrap();
                let v = log_integral(&a, &c, tol).unwrap().value;
                assert!(v.distance(&m.scale(2.0 * PI * n as f64)) < 1e-9);
            }
        }
        // a circle through the point itself is rejected
        let through = Path::circle(&CDNumber::real(o, 1.0), 1.0, &e(o, 1), 1.0).unwrap();
        assert!(log_integral(&CDNumber::zero(o), &through, tol).is_err());
    }

    #[test]
    fn log_integral_is_additive_on_arcs() {
        let o = lv(3);
        let c = unit_circle(o, 4, 2.0);
        let whole = log_integral(&CDNumber::zero(o), &c, 1e-9).unwrap().value;
        let a = log_integral(&CDNumber::zero(o), &c.piece(0.0, 0.35), 1e-9).unwrap().value;
        let b = log_integral(&CDNumber::zero(o), &c.piece(0.35, 1.0), 1e-9).unwrap().value;
        assert!(whole.distance(&(a + b)) < 1e-10);
    }

    #[test]
    fn off_plane_loops_are_contractible() {
        // a loop winding in two planes at once never circles the real axis
        let o = lv(3);
        // its (1, e1) shadow winds once, but it lifts off the negative axis
        let loop_ = Path::parametric(o, move |t| {
            let a = 2.0 * PI * t;
            Ok(&CDNumber::real(o, a.cos()) + &(&e(o, 1).scale(a.sin()) + &e(o, 2).scale(0.3 * (1.0 - a.cos()))))
        });
        let v = log_integral(&CDNumber::zero(o), &loop_, 1e-9).unwrap().value;
        assert!(v.norm() < 1e-9);
        let tilted = Path::parametric(o, move |t| {
            let a = 2.0 * PI * t;
            Ok(&CDNumber::real(o, 0.3 * a.cos()) + &(&e(o, 1).scale(a.sin()) + &e(o, 2).scale(a.cos())))
        });
        let v = log_integral(&CDNumber::zero(o), &tilted, 1e-9).unwrap().value;
        assert!(v.norm() < 1e-9);
    }

    #[test]
    fn path_json() {
        let spec: PathSpec = serde_json::from_str(
            r#"{"kind":"circle","center":[0,0,0,0],"radius":2,"direction":[0,0,3,0],"turns":2}"#,
        )
        .unwrap();
        let p = spec.build().unwrap();
        match &p {
            Path::Circle { direction, .. } => assert_eq!(direction.coeffs(), &[0.0, 0.0, 1.0, 0.0]),
            other => panic!("{other:?}"),
        }
        let spec: PathSpec =
            serde_json::from_str(r#"{"kind":"polyline","points":[[0,0],[1,0],[1,1]]}"#).unwrap();
        assert!(spec.build().is_ok());
        assert!(serde_json::from_str::<PathSpec>(r#"{"kind":"spiral"}"#).is_err());
        let bad: PathSpec =
            serde_json::from_str(r#"{"kind":"polyline","points":[[0,0],[1,0,0,0]]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    #[test]
    fn distance_to_path() {
        let o = lv(3);
        let c = Path::circle(&CDNumber::zero(o), 2.0, &e(o, 1), 1.0).unwrap();
        assert!((c.distance_to(&CDNumber::zero(o)).unwrap() - 2.0).abs() < 1e-15);
        assert!((c.distance_to(&e(o, 3)).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert!(c.distance_to(&e(o, 1).scale(2.0)).unwrap() < 1e-15);
        let sq = Path::square(&CDNumber::zero(o), 1.0, &e(o, 1)).unwrap();
        assert!((sq.distance_to(&CDNumber::zero(o)).unwrap() - 1.0).abs() < 1e-15);
    }
}
