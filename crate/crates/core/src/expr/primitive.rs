use super::eval::Differential;
use super::{mul_trees, Node, Phrase, Var, Word};
use crate::algebra::CDNumber;
use crate::error::{Error, Result};

impl Phrase {
    /// Primitive `g` with `(D_z g)(z).1 = f(z)` for phrases whose words each
    /// contain exactly one `z` leaf `(z-c)^n` inside a tree of constants.
    /// The leaf becomes `(z-c)^{n+1}/(n+1)`, or `Ln(z-c)` when `n = -1`;
    /// constant words `K` become `K*z`.
    pub fn primitive(&self) -> Result<Phrase> {
        let mut out = Phrase::zero(self.level);
        for w in &self.words {
            out.push(self.primitive_word(w)?);
        }
        Ok(out)
    }

    fn primitive_word(&self, w: &Word) -> Result<Word> {
        let shape_error = || Error::UnsupportedShape {
            word: Phrase::from_words(self.level, [w.clone()]).to_string(),
        };
        let (s, tree) = match w.tree.clone() {
            None => (1.0, None),
            Some(t) => collapse(t),
        };
        let scale = w.scale * s;
        let Some(tree) = tree else {
            return Ok(Word {
                scale,
                tree: Some(Node::z(self.level)),
            });
        };
        if let Node::Const(_) = tree {
            let (s2, t) = mul_trees(Some(tree), Some(Node::z(self.level)));
            return Ok(Word { scale: scale * s2, tree: t });
        }
        let z_leaves = tree.count_leaves(&|n| matches!(n, Node::Var { var: Var::Z, .. }));
        let others = tree.count_leaves(&|n| {
            matches!(n, Node::Var { var: Var::Zc, .. } | Node::Ln { .. })
        });
        if z_leaves != 1 || others != 0 {
            return Err(shape_error());
        }
        let mut factor = 1.0;
        let tree = replace_z_leaf(tree, &mut |center, pow| {
            if pow == -1 {
                Node::Ln { center }
            } else {
                factor = 1.0 / (pow as f64 + 1.0);
                Node::Var {
                    var: Var::Z,
                    center,
                    pow: pow + 1,
                }
            }
        });
        Ok(Word {
            scale: scale * factor,
            tree: Some(tree),
        })
    }

    /// `f^(z).h = (D_z g)(z).h` for the primitive `g` of `f`.
    pub fn hat_apply(&self, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
        self.primitive()?.differential(z, h, Differential::Z)
    }
}

/// Merges sibling leaves `(v-c)^a (v-c)^b` into `(v-c)^{a+b}` (valid by
/// power-associativity) and folds constant products, bottom-up.
fn collapse(n: Node) -> (f64, Option<Node>) {
    match n {
        Node::Mul(a, b) => {
            let (sa, ta) = collapse(*a);
            let (sb, tb) = collapse(*b);
            let s = sa * sb;
            match (ta, tb) {
                (
                    Some(Node::Var { var: va, center: ca, pow: pa }),
                    Some(Node::Var { var: vb, center: cb, pow: pb }),
                ) if va == vb && ca == cb => {
                    if pa + pb == 0 {
                        (s, None)
                    } else {
                        (s, Some(Node::Var { var: va, center: ca, pow: pa + pb }))
                    }
                }
                (ta, tb) => {
                    let (s2, t) = mul_trees(ta, tb);
                    (s * s2, t)
                }
            }
        }
        leaf => (1.0, Some(leaf)),
    }
}

fn replace_z_leaf(n: Node, f: &mut impl FnMut(CDNumber, i32) -> Node) -> Node {
    match n {
        Node::Var { var: Var::Z, center, pow } => f(center, pow),
        Node::Mul(a, b) => Node::Mul(
            Box::new(replace_z_leaf(*a, f)),
            Box::new(replace_z_leaf(*b, f)),
        ),
        other => other,
    }
}
