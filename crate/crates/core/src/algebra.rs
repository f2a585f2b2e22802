//! Cayley-Dickson algebras `A_r` of dimension `2^r`.
//!
//! Elements are dense coefficient vectors over the basis `1, i_1, ..., i_{2^r-1}`
//! where `i_{2^{r-1}} = l` is the element adjoined by the last doubling step and
//! `i_{2^{r-1}+m} = i_m l`. Products go through a [`BasisTable`] built once per
//! level from the doubling law
//!
//! ```text
//! (a + b l)(c + d l) = (a c - d* b) + (d a + b c*) l
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported level (dimension 256).
pub const MAX_LEVEL: u8 = 8;

/// Inversion threshold on `|z|`.
pub const EPS_ZERO: f64 = 1e-300;

/// Level `r` of the algebra `A_r`; the real dimension is `2^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraLevel(u8);

impl AlgebraLevel {
    pub const COMPLEX: AlgebraLevel = AlgebraLevel(1);
    pub const QUATERNION: AlgebraLevel = AlgebraLevel(2);
    pub const OCTONION: AlgebraLevel = AlgebraLevel(3);
    pub const SEDENION: AlgebraLevel = AlgebraLevel(4);

    pub fn new(r: u32) -> Result<Self> {
        if (1..=MAX_LEVEL as u32).contains(&r) {
            Ok(AlgebraLevel(r as u8))
        } else {
            Err(Error::InvalidLevel(r))
        }
    }

    pub fn r(self) -> u8 {
        self.0
    }

    pub fn dim(self) -> usize {
        1 << self.0
    }

    fn from_dim(dim: usize) -> Result<Self> {
        if dim.is_power_of_two() && dim >= 2 {
            AlgebraLevel::new(dim.trailing_zeros())
        } else {
            Err(Error::Invalid(format!(
                "coefficient vector of length {dim} is not 2^r with 1 <= r <= 8"
            )))
        }
    }
}

impl fmt::Display for AlgebraLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}", self.0)
    }
}

impl Serialize for AlgebraLevel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

impl<'de> Deserialize<'de> for AlgebraLevel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = u32::deserialize(d)?;
        AlgebraLevel::new(r).map_err(serde::de::Error::custom)
    }
}

/// Product of two raw coefficient vectors by the doubling recursion.
///
/// This is the reference route; [`BasisTable`] is derived from it and the
/// two are cross-checked in tests.
pub fn doubling_mul(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    if n == 1 {
        return vec![x[0] * y[0]];
    }
    if x.iter().all(|&t| t == 0.0) || y.iter().all(|&t| t == 0.0) {
        return vec![0.0; n];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[f64]| -> Vec<f64> {
        let mut out: Vec<f64> = v.iter().map(|t| -t).collect();
        out[0] = v[0];
        out
    };
    let ac = doubling_mul(a, c);
    let db = doubling_mul(&conj(d), b);
    let da = doubling_mul(d, a);
    let bc = doubling_mul(b, &conj(c));
    let mut out = Vec::with_capacity(n);
    out.extend(ac.iter().zip(&db).map(|(p, q)| p - q));
    out.extend(da.iter().zip(&bc).map(|(p, q)| p + q));
    out
}

/// Multiplication table of basis elements: `i_a i_b = sign * i_index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTable {
    level: AlgebraLevel,
    sign: Vec<i8>,
    index: Vec<u16>,
}

impl BasisTable {
    /// Builds the table by running the doubling recursion on every basis pair.
    pub fn from_doubling(level: AlgebraLevel) -> Self {
        let n = level.dim();
        let mut sign = vec![0i8; n * n];
        let mut index = vec![0u16; n * n];
        // basis products are computed level by level: the table for A_r
        // restricted to the first half is the table for A_{r-1}
        for a in 0..n {
            for b in 0..n {
                let (s, k) = basis_product(a, b, n);
                sign[a * n + b] = s;
                index[a * n + b] = k as u16;
            }
        }
        BasisTable { level, sign, index }
    }

    /// Shared table for `level`, built on first use.
    pub fn get(level: AlgebraLevel) -> &'static BasisTable {
        static TABLES: [OnceLock<BasisTable>; MAX_LEVEL as usize] =
            [const { OnceLock::new() }; MAX_LEVEL as usize];
        TABLES[level.r() as usize - 1].get_or_init(|| BasisTable::from_doubling(level))
    }

    pub fn level(&self) -> AlgebraLevel {
        self.level
    }

    /// `(sign, index)` with `i_a i_b = sign * i_index`.
    pub fn product(&self, a: usize, b: usize) -> (i8, usize) {
        let n = self.level.dim();
        (self.sign[a * n + b], self.index[a * n + b] as usize)
    }

    /// Copy of the table with the sign of one entry flipped. Used to check
    /// that the identity suite detects a corrupted multiplication.
    pub fn with_flipped_sign(&self, a: usize, b: usize) -> BasisTable {
        let n = self.level.dim();
        let mut t = self.clone();
        t.sign[a * n + b] = -t.sign[a * n + b];
        t
    }

    pub fn multiply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let n = self.level.dim();
        let mut out = vec![0.0; n];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            let row = a * n;
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0.0 {
                    continue;
                }
                let k = self.index[row + b] as usize;
                let p = xa * yb;
                if self.sign[row + b] > 0 {
                    out[k] += p;
                } else {
                    out[k] -= p;
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &CDNumber, y: &CDNumber) -> CDNumber {
        debug_assert_eq!(x.level, self.level);
        CDNumber {
            level: self.level,
            coeffs: self.multiply(&x.coeffs, &y.coeffs),
        }
    }
}

// i_a i_b in dimension n via (a + b l)(c + d l) with one of each pair zero.
fn basis_product(a: usize, b: usize, n: usize) -> (i8, usize) {
    if n == 1 {
        return (1, 0);
    }
    let h = n / 2;
    let conj_sign = |k: usize| if k == 0 { 1 } else { -1 };
    match (a < h, b < h) {
        // a c
        (true, true) => basis_product(a, b, h),
        // a (d l) = (d a) l
        (true, false) => {
            let (s, k) = basis_product(b - h, a, h);
            (s, k + h)
        }
        // (b l) c = (b c*) l
        (false, true) => {
            let (s, k) = basis_product(a - h, b, h);
            (s * conj_sign(b), k + h)
        }
        // (b l)(d l) = -d* b
        (false, false) => {
            let (s, k) = basis_product(b - h, a - h, h);
            (-s * conj_sign(b - h), k)
        }
    }
}

/// An element of `A_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct CDNumber {
    level: AlgebraLevel,
    coeffs: Vec<f64>,
}

impl CDNumber {
    pub fn zero(level: AlgebraLevel) -> Self {
        CDNumber {
            level,
            coeffs: vec![0.0; level.dim()],
        }
    }

    pub fn one(level: AlgebraLevel) -> Self {
        Self::real(level, 1.0)
    }

    pub fn real(level: AlgebraLevel, v: f64) -> Self {
        let mut z = Self::zero(level);
        z.coeffs[0] = v;
        z
    }

    /// Basis element `i_k` (`i_0 = 1`).
    pub fn basis(level: AlgebraLevel, k: usize) -> Result<Self> {
        if k >= level.dim() {
            return Err(Error::Invalid(format!(
                "basis index e{k} out of range for {level} (dimension {})",
                level.dim()
            )));
        }
        let mut z = Self::zero(level);
        z.coeffs[k] = 1.0;
        Ok(z)
    }

    pub fn from_coeffs(level: AlgebraLevel, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != level.dim() {
            return Err(Error::Invalid(format!(
                "expected {} coefficients for {level}, got {}",
                level.dim(),
                coeffs.len()
            )));
        }
        Ok(CDNumber { level, coeffs })
    }

    /// Infers the level from the vector length.
    pub fn from_vec(coeffs: Vec<f64>) -> Result<Self> {
        let level = AlgebraLevel::from_dim(coeffs.len())?;
        Ok(CDNumber { level, coeffs })
    }

    /// Uniform coefficients in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(level: AlgebraLevel, rng: &mut R) -> Self {
        let coeffs = (0..level.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        CDNumber { level, coeffs }
    }

    /// Random pure imaginary element of unit norm.
    pub fn random_unit_imaginary<R: Rng + ?Sized>(level: AlgebraLevel, rng: &mut R) -> Self {
        loop {
            let mut z = Self::random(level, rng);
            z.coeffs[0] = 0.0;
            let n = z.norm();
            if n > 1e-3 {
                return z.scale(1.0 / n);
            }
        }
    }

    pub fn level(&self) -> AlgebraLevel {
        self.level
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn re(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn im(&self) -> CDNumber {
        let mut m = self.clone();
        m.coeffs[0] = 0.0;
        m
    }

    /// `z = v + M` with `v = Re z` and `M = (z - z*)/2`.
    pub fn split(&self) -> (f64, CDNumber) {
        (self.re(), self.im())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0.0)
    }

    pub fn conj(&self) -> CDNumber {
        let mut c: Vec<f64> = self.coeffs.iter().map(|v| -v).collect();
        c[0] = self.coeffs[0];
        CDNumber {
            level: self.level,
            coeffs: c,
        }
    }

    /// Conjugate through `z* = (2^r - 2)^{-1} (-z + sum_s s (z s*))`, an
    /// independent route to [`CDNumber::conj`]. Requires `r >= 2`.
    pub fn conj_via_generators(&self) -> Result<CDNumber> {
        if self.level.r() < 2 {
            return Err(Error::Unsupported(
                "generator form of the conjugate needs r >= 2".into(),
            ));
        }
        let n = self.level.dim();
        let mut acc = -self.clone();
        for s in 1..n {
            let e = CDNumber::basis(self.level, s)?;
            acc += &(&e * &(self * &e.conj()));
        }
        Ok(acc.scale(1.0 / (n as f64 - 2.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of coefficient vectors, `Re(a b*)`.
    pub fn dot(&self, other: &CDNumber) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, t: f64) -> CDNumber {
        CDNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * t).collect(),
        }
    }

    pub fn inverse(&self) -> Result<CDNumber> {
        let n2 = self.norm_sqr();
        if n2.sqrt() <= EPS_ZERO {
            return Err(Error::Singular { norm: n2.sqrt() });
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn checked_mul(&self, other: &CDNumber) -> Result<CDNumber> {
        self.check_level(other)?;
        Ok(BasisTable::get(self.level).mul(self, other))
    }

    pub fn checked_add(&self, other: &CDNumber) -> Result<CDNumber> {
        self.check_level(other)?;
        Ok(self + other)
    }

    fn check_level(&self, other: &CDNumber) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level.r(),
                right: other.level.r(),
            });
        }
        Ok(())
    }

    /// Integer power. Positive powers are right-nested `z(z(...z))`;
    /// the result does not depend on bracketing since `A_r` is
    /// power-associative.
    pub fn powi(&self, n: i32) -> Result<CDNumber> {
        let base = if n < 0 {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut acc = CDNumber::one(self.level);
        for _ in 0..n.unsigned_abs() {
            acc = &base * &acc;
        }
        Ok(acc)
    }

    /// Copies the coefficients into a larger algebra; `A_r` is the subalgebra
    /// spanned by the first `2^r` basis elements of `A_s`, `s >= r`.
    pub fn embed(&self, target: AlgebraLevel) -> Result<CDNumber> {
        if target < self.level {
            return Err(Error::Invalid(format!(
                "cannot embed {} into smaller {target}",
                self.level
            )));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(target.dim(), 0.0);
        Ok(CDNumber {
            level: target,
            coeffs,
        })
    }

    pub fn distance(&self, other: &CDNumber) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<usize> for CDNumber {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

impl fmt::Display for CDNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{}*e{k}", c.abs())?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CDNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CDNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        CDNumber::from_vec(v).map_err(serde::de::Error::custom)
    }
}

// Operators assume equal levels and panic otherwise; `checked_*` report the
// mismatch as an error instead.

impl Add for &CDNumber {
    type Output = CDNumber;
    fn add(self, rhs: &CDNumber) -> CDNumber {
        assert_eq!(self.level, rhs.level, "level mismatch in addition");
        CDNumber {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for CDNumber {
    type Output = CDNumber;
    fn add(mut self, rhs: CDNumber) -> CDNumber {
        self += &rhs;
        self
    }
}

impl Sub for &CDNumber {
    type Output = CDNumber;
    fn sub(self, rhs: &CDNumber) -> CDNumber {
        assert_eq!(self.level, rhs.level, "level mismatch in subtraction");
        CDNumber {
            level: self.level,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for CDNumber {
    type Output = CDNumber;
    fn sub(mut self, rhs: CDNumber) -> CDNumber {
        self -= &rhs;
        self
    }
}

impl AddAssign<&CDNumber> for CDNumber {
    fn add_assign(&mut self, rhs: &CDNumber) {
        assert_eq!(self.level, rhs.level, "level mismatch in addition");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CDNumber> for CDNumber {
    fn sub_assign(&mut self, rhs: &CDNumber) {
        assert_eq!(self.level, rhs.level, "level mismatch in subtraction");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for CDNumber {
    type Output = CDNumber;
    fn neg(mut self) -> CDNumber {
        for c in &mut self.coeffs {
            *c = -*c;
        }
        self
    }
}

impl Neg for &CDNumber {
    type Output = CDNumber;
    fn neg(self) -> CDNumber {
        -self.clone()
    }
}

impl Mul for &CDNumber {
    type Output = CDNumber;
    fn mul(self, rhs: &CDNumber) -> CDNumber {
        assert_eq!(self.level, rhs.level, "level mismatch in multiplication");
        BasisTable::get(self.level).mul(self, rhs)
    }
}

impl Mul for CDNumber {
    type Output = CDNumber;
    fn mul(self, rhs: CDNumber) -> CDNumber {
        &self * &rhs
    }
}

impl Mul<f64> for &CDNumber {
    type Output = CDNumber;
    fn mul(self, t: f64) -> CDNumber {
        self.scale(t)
    }
}

impl Mul<f64> for CDNumber {
    type Output = CDNumber;
    fn mul(self, t: f64) -> CDNumber {
        self.scale(t)
    }
}

/// Searches products `(i_a ± i_b)(i_c ± i_d)` of two-term basis sums for a
/// pair with `|xy| < 1e-12 |x||y|`. Returns `None` when nothing is found
/// within `search_budget` candidate products; for `r <= 3` there is nothing
/// to find since norms multiply.
pub fn find_zero_divisor(
    level: AlgebraLevel,
    search_budget: usize,
) -> Option<(CDNumber, CDNumber)> {
    let table = BasisTable::get(level);
    let candidates = two_term_sums(level);
    let mut spent = 0usize;
    for x in &candidates {
        for y in &candidates {
            if spent >= search_budget {
                return None;
            }
            spent += 1;
            let p = table.mul(x, y);
            if p.norm() < 1e-12 * x.norm() * y.norm() {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Searches two-term basis sums for a pair violating left alternativity
/// `(xx)y = x(xy)` by more than `threshold`. Returns the pair and the residual.
pub fn find_alternativity_violation(
    level: AlgebraLevel,
    threshold: f64,
    search_budget: usize,
) -> Option<(CDNumber, CDNumber, f64)> {
    let table = BasisTable::get(level);
    let candidates = two_term_sums(level);
    let mut spent = 0usize;
    for x in &candidates {
        let xx = table.mul(x, x);
        for y in &candidates {
            if spent >= search_budget {
                return None;
            }
            spent += 1;
            let lhs = table.mul(&xx, y);
            let rhs = table.mul(x, &table.mul(x, y));
            let res = lhs.distance(&rhs);
            if res > threshold {
                return Some((x.clone(), y.clone(), res));
            }
        }
    }
    None
}

fn two_term_sums(level: AlgebraLevel) -> Vec<CDNumber> {
    let n = level.dim();
    let mut out = Vec::new();
    for a in 1..n {
        for b in (a + 1)..n {
            for sign in [1.0, -1.0] {
                let mut z = CDNumber::zero(level);
                z.coeffs[a] = 1.0;
                z.coeffs[b] = sign;
                out.push(z);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(level: AlgebraLevel, k: usize) -> CDNumber {
        CDNumber::basis(level, k).unwrap()
    }

    #[test]
    fn quaternion_units() {
        let q = AlgebraLevel::QUATERNION;
        assert_eq!(&e(q, 1) * &e(q, 2), e(q, 3));
        assert_eq!(&e(q, 2) * &e(q, 1), -e(q, 3));
        assert_eq!(&e(q, 2) * &e(q, 3), e(q, 1));
        assert_eq!(&e(q, 3) * &e(q, 1), e(q, 2));
        for k in 1..4 {
            assert_eq!(&e(q, k) * &e(q, k), -CDNumber::one(q));
        }
    }

    #[test]
    fn octonion_nonassociative_triple() {
        let o = AlgebraLevel::OCTONION;
        let (i, j, l) = (e(o, 1), e(o, 2), e(o, 4));
        let kl = e(o, 7);
        assert_eq!(&(&i * &j) * &l, kl);
        assert_eq!(&i * &(&j * &l), -kl);
    }

    #[test]
    fn identity_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in 1..=6 {
            let lv = AlgebraLevel::new(r).unwrap();
            let z = CDNumber::random(lv, &mut rng);
            let one = CDNumber::one(lv);
            assert_eq!(&one * &z, z);
            assert_eq!(&z * &one, z);
        }
    }

    #[test]
    fn table_matches_doubling_on_all_basis_pairs() {
        for r in 1..=MAX_LEVEL as u32 {
            let lv = AlgebraLevel::new(r).unwrap();
            let t = BasisTable::get(lv);
            let n = lv.dim();
            for a in 0..n {
                let ea = e(lv, a);
                for b in 0..n {
                    let eb = e(lv, b);
                    let want = doubling_mul(ea.coeffs(), eb.coeffs());
                    let (s, k) = t.product(a, b);
                    let mut got = vec![0.0; n];
                    got[k] = s as f64;
                    assert_eq!(got, want, "r={r} a={a} b={b}");
                }
            }
            assert_eq!(t.product(0, 5 % n), (1, 5 % n));
            assert_eq!(t.product(3 % n, 0), (1, 3 % n));
        }
    }

    #[test]
    fn table_matches_doubling_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for r in 1..=5 {
            let lv = AlgebraLevel::new(r).unwrap();
            for _ in 0..20 {
                let a = CDNumber::random(lv, &mut rng);
                let b = CDNumber::random(lv, &mut rng);
                let want = doubling_mul(a.coeffs(), b.coeffs());
                let got = &a * &b;
                for (x, y) in got.coeffs().iter().zip(&want) {
                    assert!((x - y).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn conj_examples() {
        let q = AlgebraLevel::QUATERNION;
        let z = CDNumber::from_coeffs(q, vec![1.0, 2.0, 3.0, 0.0]).unwrap();
        assert_eq!(z.conj().coeffs(), &[1.0, -2.0, -3.0, -0.0]);
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn conj_via_generators_examples() {
        let q = AlgebraLevel::QUATERNION;
        let z = &CDNumber::one(q) + &e(q, 1);
        let c = z.conj_via_generators().unwrap();
        assert!(c.distance(&z.conj()) < 1e-15);
        let five = CDNumber::real(AlgebraLevel::OCTONION, 5.0);
        assert!(five.conj_via_generators().unwrap().distance(&five) < 1e-14);
        assert!(matches!(
            CDNumber::one(AlgebraLevel::COMPLEX).conj_via_generators(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn norm_and_inverse() {
        let q = AlgebraLevel::QUATERNION;
        let z = CDNumber::from_coeffs(q, vec![1.0; 4]).unwrap();
        assert_eq!(z.norm(), 2.0);
        assert_eq!(e(q, 1).inverse().unwrap(), -e(q, 1));
        assert_eq!(
            CDNumber::real(q, 2.0).inverse().unwrap(),
            CDNumber::real(q, 0.5)
        );
        assert!(matches!(
            CDNumber::zero(q).inverse(),
            Err(Error::Singular { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = AlgebraLevel::SEDENION;
        let z = CDNumber::random(s, &mut rng);
        let z = z.scale(1.0 / z.norm());
        let zi = z.inverse().unwrap();
        assert!((&z * &zi).distance(&CDNumber::one(s)) < 1e-14);
        assert!((&zi * &z).distance(&CDNumber::one(s)) < 1e-14);
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a = CDNumber::one(AlgebraLevel::QUATERNION);
        let b = CDNumber::one(AlgebraLevel::OCTONION);
        assert_eq!(
            a.checked_mul(&b),
            Err(Error::LevelMismatch { left: 2, right: 3 })
        );
        assert!(AlgebraLevel::new(0).is_err());
        assert!(AlgebraLevel::new(9).is_err());
    }

    #[test]
    fn powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = AlgebraLevel::SEDENION;
        let z = CDNumber::random(s, &mut rng);
        assert_eq!(z.powi(0).unwrap(), CDNumber::one(s));
        let lhs = &z.powi(3).unwrap() * &z.powi(2).unwrap();
        assert!(lhs.distance(&z.powi(5).unwrap()) < 1e-13 * z.norm().powi(5));
        let m = CDNumber::random_unit_imaginary(s, &mut rng);
        assert!(m.powi(2).unwrap().distance(&-CDNumber::one(s)) < 1e-14);
        assert!(CDNumber::zero(s).powi(-1).is_err());
    }

    #[test]
    fn split_recombines() {
        let c = AlgebraLevel::COMPLEX;
        let z = CDNumber::from_coeffs(c, vec![3.0, 4.0]).unwrap();
        let (v, m) = z.split();
        assert_eq!(v, 3.0);
        assert_eq!(m.coeffs(), &[0.0, 4.0]);
        assert_eq!(&CDNumber::real(c, v) + &m, z);
    }

    #[test]
    fn embedding_is_a_subalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = AlgebraLevel::QUATERNION;
        let s = AlgebraLevel::SEDENION;
        assert_eq!(e(q, 1).embed(AlgebraLevel::OCTONION).unwrap(), e(AlgebraLevel::OCTONION, 1));
        for _ in 0..50 {
            let a = CDNumber::random(q, &mut rng);
            let b = CDNumber::random(q, &mut rng);
            let lhs = &a.embed(s).unwrap() * &b.embed(s).unwrap();
            let rhs = (&a * &b).embed(s).unwrap();
            assert!(lhs.distance(&rhs) < 1e-15);
        }
        assert!(CDNumber::one(s).embed(q).is_err());
        assert_eq!(CDNumber::one(q).embed(s).unwrap(), CDNumber::one(s));
    }

    #[test]
    fn zero_divisors_only_from_sedenions() {
        for r in 1..=3 {
            assert!(find_zero_divisor(AlgebraLevel::new(r).unwrap(), 1_000_000).is_none());
        }
        let (a, b) = find_zero_divisor(AlgebraLevel::SEDENION, 1_000_000).unwrap();
        assert_eq!((&a * &b).norm(), 0.0);
        assert_eq!((a.norm_sqr() * b.norm_sqr()).sqrt(), 2.0);
    }

    #[test]
    fn alternativity_violation_only_from_sedenions() {
        assert!(find_alternativity_violation(AlgebraLevel::OCTONION, 1e-12, usize::MAX).is_none());
        let (_, _, res) =
            find_alternativity_violation(AlgebraLevel::SEDENION, 0.1, usize::MAX).unwrap();
        assert!(res > 0.1);
    }

    #[test]
    fn json_form() {
        let z = e(AlgebraLevel::QUATERNION, 3);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, "[0.0,0.0,0.0,1.0]");
        let back: CDNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<CDNumber>("[1.0,2.0,3.0]").is_err());
    }
}
