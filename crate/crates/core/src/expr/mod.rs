//! Noncommutative, nonassociative polynomial expressions in `z` and `z~`.
//!
//! A [`Phrase`] is a sum of [`Word`]s. Each word is a real scale times a
//! binary product tree whose leaves are constants of `A_r`, powers
//! `(z - c)^n` / `(z~ - c)^n` of a shifted variable, or `Ln(z - c)`. The tree
//! is the multiplication order, so `(a*b)*c` and `a*(b*c)` stay distinct.
//!
//! Real factors commute and associate with everything, so they are pulled out
//! of the tree into the word's scale. Products of two constant leaves are
//! folded. Nothing else is rewritten.

mod eval;
mod format;
mod parser;
mod primitive;

pub use eval::{pow_with_derivative, Differential};
pub use format::{from_json, to_json};
pub use parser::parse;

use crate::algebra::{AlgebraLevel, CDNumber};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    /// The conjugate variable `z~ = z*`.
    Zc,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    /// A non-real constant; real constants live in [`Word::scale`].
    Const(CDNumber),
    /// `(v - center)^pow` with `v` either `z` or `z~`; `pow != 0`.
    Var {
        var: Var,
        center: CDNumber,
        pow: i32,
    },
    /// Principal `Ln(z - center)`.
    Ln { center: CDNumber },
    Mul(Box<Node>, Box<Node>),
}

impl Node {
    pub fn z(level: AlgebraLevel) -> Node {
        Node::Var {
            var: Var::Z,
            center: CDNumber::zero(level),
            pow: 1,
        }
    }

    fn any_leaf(&self, pred: &impl Fn(&Node) -> bool) -> bool {
        match self {
            Node::Mul(a, b) => a.any_leaf(pred) || b.any_leaf(pred),
            leaf => pred(leaf),
        }
    }

    fn count_leaves(&self, pred: &impl Fn(&Node) -> bool) -> usize {
        match self {
            Node::Mul(a, b) => a.count_leaves(pred) + b.count_leaves(pred),
            leaf => pred(leaf) as usize,
        }
    }

    fn leaf_count(&self) -> usize {
        self.count_leaves(&|_| true)
    }
}

/// `scale * tree`; a missing tree stands for `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    pub scale: f64,
    pub tree: Option<Node>,
}

impl Word {
    pub fn constant(c: &CDNumber) -> Word {
        if c.is_real() {
            Word {
                scale: c.re(),
                tree: None,
            }
        } else {
            Word {
                scale: 1.0,
                tree: Some(Node::Const(c.clone())),
            }
        }
    }

    pub fn from_node(node: Node) -> Word {
        match node {
            Node::Const(c) => Word::constant(&c),
            other => Word {
                scale: 1.0,
                tree: Some(other),
            },
        }
    }

    /// Product `self * other` with the two trees as the two operands.
    pub fn mul(&self, other: &Word) -> Word {
        let (s, tree) = mul_trees(self.tree.clone(), other.tree.clone());
        Word {
            scale: self.scale * other.scale * s,
            tree,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.tree, None | Some(Node::Const(_)))
    }

    /// Value of a constant word.
    fn constant_value(&self, level: AlgebraLevel) -> Option<CDNumber> {
        match &self.tree {
            None => Some(CDNumber::real(level, self.scale)),
            Some(Node::Const(c)) => Some(c.scale(self.scale)),
            _ => None,
        }
    }

    pub fn has_var(&self, var: Var) -> bool {
        self.tree
            .as_ref()
            .is_some_and(|t| t.any_leaf(&|n| matches!(n, Node::Var { var: v, .. } if *v == var)))
    }

    pub fn has_ln(&self) -> bool {
        self.tree
            .as_ref()
            .is_some_and(|t| t.any_leaf(&|n| matches!(n, Node::Ln { .. })))
    }
}

// Multiplies two optional trees, folding constant leaves; returns the real
// factor split off by the folding.
fn mul_trees(a: Option<Node>, b: Option<Node>) -> (f64, Option<Node>) {
    match (a, b) {
        (None, x) | (x, None) => (1.0, x),
        (Some(Node::Const(p)), Some(Node::Const(q))) => {
            let w = Word::constant(&(&p * &q));
            (w.scale, w.tree)
        }
        (Some(x), Some(y)) => (1.0, Some(Node::Mul(Box::new(x), Box::new(y)))),
    }
}

/// A sum of words over a fixed algebra level.
#[derive(Clone, Debug, PartialEq)]
pub struct Phrase {
    level: AlgebraLevel,
    words: Vec<Word>,
}

impl Phrase {
    pub fn zero(level: AlgebraLevel) -> Phrase {
        Phrase {
            level,
            words: Vec::new(),
        }
    }

    pub fn constant(c: &CDNumber) -> Phrase {
        Phrase::zero(c.level()).with_word(Word::constant(c))
    }

    pub fn real(level: AlgebraLevel, v: f64) -> Phrase {
        Phrase::constant(&CDNumber::real(level, v))
    }

    /// `(v - center)^pow`.
    pub fn var(var: Var, center: &CDNumber, pow: i32) -> Phrase {
        let level = center.level();
        if pow == 0 {
            return Phrase::real(level, 1.0);
        }
        Phrase::zero(level).with_word(Word::from_node(Node::Var {
            var,
            center: center.clone(),
            pow,
        }))
    }

    /// `z^pow` about the origin.
    pub fn z_pow(level: AlgebraLevel, pow: i32) -> Phrase {
        Phrase::var(Var::Z, &CDNumber::zero(level), pow)
    }

    pub fn ln(center: &CDNumber) -> Phrase {
        Phrase::zero(center.level()).with_word(Word::from_node(Node::Ln {
            center: center.clone(),
        }))
    }

    pub fn from_words(level: AlgebraLevel, words: impl IntoIterator<Item = Word>) -> Phrase {
        let mut p = Phrase::zero(level);
        for w in words {
            p.push(w);
        }
        p
    }

    fn with_word(mut self, w: Word) -> Phrase {
        self.push(w);
        self
    }

    /// Adds a word, merging it into a syntactically identical one.
    /// Constant words are summed into a single constant word.
    pub fn push(&mut self, w: Word) {
        if w.scale == 0.0 {
            return;
        }
        if let Some(c) = w.constant_value(self.level) {
            match self.words.iter().position(Word::is_constant) {
                Some(i) => {
                    let sum = &self.words[i].constant_value(self.level).expect("constant") + &c;
                    let merged = Word::constant(&sum);
                    if merged.scale == 0.0 {
                        self.words.remove(i);
                    } else {
                        self.words[i] = merged;
                    }
                }
                None => self.words.push(Word::constant(&c)),
            }
            return;
        }
        if let Some(i) = self.words.iter().position(|x| x.tree == w.tree) {
            self.words[i].scale += w.scale;
            if self.words[i].scale == 0.0 {
                self.words.remove(i);
            }
        } else {
            self.words.push(w);
        }
    }

    pub fn level(&self) -> AlgebraLevel {
        self.level
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    fn check_level(&self, other: &Phrase) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level.r(),
                right: other.level.r(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Phrase) -> Result<Phrase> {
        self.check_level(other)?;
        let mut out = self.clone();
        for w in &other.words {
            out.push(w.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Phrase) -> Result<Phrase> {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, t: f64) -> Phrase {
        Phrase::from_words(
            self.level,
            self.words.iter().map(|w| Word {
                scale: w.scale * t,
                tree: w.tree.clone(),
            }),
        )
    }

    /// Distributes `self * other` word by word; each product keeps the two
    /// word trees as its operands.
    pub fn mul(&self, other: &Phrase) -> Result<Phrase> {
        self.check_level(other)?;
        let mut out = Phrase::zero(self.level);
        for a in &self.words {
            for b in &other.words {
                out.push(a.mul(b));
            }
        }
        Ok(out)
    }

    /// Left-multiplies by a constant, `c * self`.
    pub fn left_mul(&self, c: &CDNumber) -> Result<Phrase> {
        Phrase::constant(c).mul(self)
    }

    /// Right-multiplies by a constant, `self * c`.
    pub fn right_mul(&self, c: &CDNumber) -> Result<Phrase> {
        self.mul(&Phrase::constant(c))
    }

    /// Value if every word is constant.
    pub fn constant_value(&self) -> Option<CDNumber> {
        let mut acc = CDNumber::zero(self.level);
        for w in &self.words {
            acc += &w.constant_value(self.level)?;
        }
        Some(acc)
    }

    /// `Some((var, c))` when the phrase is exactly `v - c`.
    pub fn as_shift(&self) -> Option<(Var, CDNumber)> {
        let mut found = None;
        let mut shift = CDNumber::zero(self.level);
        for w in &self.words {
            match &w.tree {
                Some(Node::Var { var, center, pow: 1 }) if w.scale == 1.0 && found.is_none() => {
                    found = Some(*var);
                    shift += center;
                }
                _ => shift -= &w.constant_value(self.level)?,
            }
        }
        found.map(|v| (v, shift))
    }

    pub fn has_var(&self, var: Var) -> bool {
        self.words.iter().any(|w| w.has_var(var))
    }

    /// True when no word contains `z~`.
    pub fn is_holomorphic(&self) -> bool {
        !self.has_var(Var::Zc)
    }

    /// Sum over words of `|scale|` times the norms of the constant leaves;
    /// a crude size bound for polynomial phrases.
    pub fn coefficient_mass(&self) -> f64 {
        fn leaf_mass(n: &Node) -> f64 {
            match n {
                Node::Const(c) => c.norm(),
                Node::Mul(a, b) => leaf_mass(a) * leaf_mass(b),
                _ => 1.0,
            }
        }
        self.words
            .iter()
            .map(|w| w.scale.abs() * w.tree.as_ref().map_or(1.0, leaf_mass))
            .sum()
    }

    /// Highest positive exponent of `z` appearing in any word, counting
    /// repeated leaves.
    pub fn degree(&self) -> i32 {
        fn deg(n: &Node) -> i32 {
            match n {
                Node::Var { pow, .. } => (*pow).max(0),
                Node::Mul(a, b) => deg(a) + deg(b),
                _ => 0,
            }
        }
        self.words
            .iter()
            .map(|w| w.tree.as_ref().map_or(0, deg))
            .max()
            .unwrap_or(0)
    }

    /// Total number of leaves over all words.
    pub fn size(&self) -> usize {
        self.words
            .iter()
            .map(|w| w.tree.as_ref().map_or(1, Node::leaf_count))
            .sum()
    }

    /// Every non-real constant and every nonzero centre in the phrase.
    pub fn constants(&self) -> Vec<CDNumber> {
        fn walk(n: &Node, out: &mut Vec<CDNumber>) {
            match n {
                Node::Const(c) => out.push(c.clone()),
                Node::Var { center, .. } | Node::Ln { center } => {
                    if center.norm() != 0.0 {
                        out.push(center.clone())
                    }
                }
                Node::Mul(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        for w in &self.words {
            if let Some(t) = &w.tree {
                walk(t, &mut out);
            }
        }
        out
    }
}

/// Functional forms of the phrase methods.
pub fn evaluate(f: &Phrase, z: &CDNumber) -> Result<CDNumber> {
    f.evaluate(z)
}

pub fn derivative_apply(f: &Phrase, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
    f.derivative_apply(z, h)
}

pub fn primitive(f: &Phrase) -> Result<Phrase> {
    f.primitive()
}

pub fn hat_apply(f: &Phrase, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
    f.hat_apply(z, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o() -> AlgebraLevel {
        AlgebraLevel::OCTONION
    }

    #[test]
    fn real_factors_move_to_scale() {
        let p = parse("z*3*e1*2", o()).unwrap();
        assert_eq!(p.words().len(), 1);
        assert_eq!(p.words()[0].scale, 6.0);
        let q = parse("e1*e1", o()).unwrap();
        assert_eq!(q, Phrase::real(o(), -1.0));
    }

    #[test]
    fn identical_words_merge() {
        let p = parse("z^2 + 3*z - z^2", o()).unwrap();
        assert_eq!(p, Phrase::z_pow(o(), 1).scale(3.0));
        assert_eq!(parse("z - z", o()).unwrap(), Phrase::zero(o()));
        // different brackets are different words
        assert_eq!(parse("(e1*z)*e2 + e1*(z*e2)", o()).unwrap().words().len(), 2);
    }

    #[test]
    fn shift_detection() {
        let c = CDNumber::basis(o(), 3).unwrap();
        let p = parse("z - e3", o()).unwrap();
        assert_eq!(p.as_shift(), Some((Var::Z, c)));
        assert_eq!(parse("z + z", o()).unwrap().as_shift(), None);
        assert_eq!(parse("e1*z - 1", o()).unwrap().as_shift(), None);
    }

    #[test]
    fn level_mismatch() {
        let a = Phrase::z_pow(o(), 1);
        let b = Phrase::z_pow(AlgebraLevel::QUATERNION, 1);
        assert!(matches!(a.add(&b), Err(Error::LevelMismatch { .. })));
    }

    #[test]
    fn degree_and_mass() {
        let p = parse("z^3 + 2*e1*z*z", o()).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.coefficient_mass(), 3.0);
    }
}
