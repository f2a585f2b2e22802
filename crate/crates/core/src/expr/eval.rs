use super::{mul_trees, Node, Phrase, Var, Word};
use crate::algebra::{CDNumber, EPS_ZERO};
use crate::error::{Error, Result};
use crate::transcendental::{dln_apply, ln_principal};

/// Which variables a derivative acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Differential {
    /// Total differential: `z` leaves see `h`, `z~` leaves see `h~`.
    Total,
    /// Only `z` leaves vary.
    Z,
    /// Only `z~` leaves vary (with direction `h~`).
    Zc,
}

impl Phrase {
    pub fn evaluate(&self, z: &CDNumber) -> Result<CDNumber> {
        self.evaluate_slots(z, &z.conj())
    }

    /// Evaluates with `z` leaves at `z1` and `z~` leaves at `z2`.
    pub fn evaluate_slots(&self, z1: &CDNumber, z2: &CDNumber) -> Result<CDNumber> {
        self.check_point(z1)?;
        let mut acc = CDNumber::zero(self.level);
        for w in &self.words {
            let v = match &w.tree {
                None => CDNumber::one(self.level),
                Some(t) => eval_node(t, z1, z2)?,
            };
            acc += &v.scale(w.scale);
        }
        Ok(acc)
    }

    /// Total differential `(Df)(z).h`.
    pub fn derivative_apply(&self, z: &CDNumber, h: &CDNumber) -> Result<CDNumber> {
        self.differential(z, h, Differential::Total)
    }

    pub fn differential(&self, z: &CDNumber, h: &CDNumber, mode: Differential) -> Result<CDNumber> {
        self.check_point(z)?;
        self.check_point(h)?;
        let zc = z.conj();
        let hc = h.conj();
        let mut acc = CDNumber::zero(self.level);
        for w in &self.words {
            if let Some(t) = &w.tree {
                let (_, d) = diff_node(t, z, &zc, h, &hc, mode)?;
                acc += &d.scale(w.scale);
            }
        }
        Ok(acc)
    }

    /// The derivative along `h = 1` as a phrase. Since `1` commutes and
    /// associates with everything, `D((z-c)^n).1 = n (z-c)^{n-1}` and the
    /// product rule keeps every bracket.
    pub fn derivative_one(&self) -> Phrase {
        let mut out = Phrase::zero(self.level);
        for w in &self.words {
            if let Some(t) = &w.tree {
                for d in diff_one(t) {
                    out.push(Word {
                        scale: d.scale * w.scale,
                        tree: d.tree,
                    });
                }
            }
        }
        out
    }

    fn check_point(&self, z: &CDNumber) -> Result<()> {
        if z.level() != self.level {
            return Err(Error::LevelMismatch {
                left: self.level.r(),
                right: z.level().r(),
            });
        }
        Ok(())
    }
}

fn leaf_base(var: Var, center: &CDNumber, z1: &CDNumber, z2: &CDNumber) -> CDNumber {
    match var {
        Var::Z => z1 - center,
        Var::Zc => z2 - center,
    }
}

fn checked_inverse(w: &CDNumber) -> Result<CDNumber> {
    let d = w.norm();
    if d <= EPS_ZERO {
        return Err(Error::Pole { distance: d });
    }
    w.inverse()
}

fn eval_node(n: &Node, z1: &CDNumber, z2: &CDNumber) -> Result<CDNumber> {
    match n {
        Node::Const(c) => Ok(c.clone()),
        Node::Var { var, center, pow } => {
            let w = leaf_base(*var, center, z1, z2);
            if *pow < 0 {
                checked_inverse(&w)?.powi(-pow)
            } else {
                w.powi(*pow)
            }
        }
        Node::Ln { center } => {
            let w = z1 - center;
            if w.norm() <= EPS_ZERO {
                return Err(Error::Pole { distance: w.norm() });
            }
            ln_principal(&w)
        }
        Node::Mul(a, b) => Ok(&eval_node(a, z1, z2)? * &eval_node(b, z1, z2)?),
    }
}

/// `(w^n, D(w^n).k)` for `w` moving with velocity `k`. Positive powers are
/// right-nested, `w^j = w w^{j-1}`, and differentiated by the product rule;
/// negative powers go through `u = w^{-1}` with
/// `D(w^{-1}).k = k*/|w|^2 - 2<w,k> w*/|w|^4`, valid in every `A_r`.
pub fn pow_with_derivative(w: &CDNumber, n: i32, k: &CDNumber) -> Result<(CDNumber, CDNumber)> {
    let (base, dbase) = if n < 0 {
        let inv = checked_inverse(w)?;
        let n2 = w.norm_sqr();
        let du = (k.conj() - w.conj().scale(2.0 * w.dot(k) / n2)).scale(1.0 / n2);
        (inv, du)
    } else {
        (w.clone(), k.clone())
    };
    let mut p = CDNumber::one(w.level());
    let mut d = CDNumber::zero(w.level());
    for _ in 0..n.unsigned_abs() {
        d = &(&dbase * &p) + &(&base * &d);
        p = &base * &p;
    }
    Ok((p, d))
}

fn diff_node(
    n: &Node,
    z: &CDNumber,
    zc: &CDNumber,
    h: &CDNumber,
    hc: &CDNumber,
    mode: Differential,
) -> Result<(CDNumber, CDNumber)> {
    let zero = || CDNumber::zero(z.level());
    match n {
        Node::Const(c) => Ok((c.clone(), zero())),
        Node::Var { var, center, pow } => {
            let w = leaf_base(*var, center, z, zc);
            let k = match (var, mode) {
                (Var::Z, Differential::Total | Differential::Z) => h.clone(),
                (Var::Zc, Differential::Total | Differential::Zc) => hc.clone(),
                _ => zero(),
            };
            pow_with_derivative(&w, *pow, &k)
        }
        Node::Ln { center } => {
            let w = z - center;
            if w.norm() <= EPS_ZERO {
                return Err(Error::Pole { distance: w.norm() });
            }
            let v = ln_principal(&w)?;
            let d = match mode {
                Differential::Zc => zero(),
                _ => dln_apply(&w, h)?,
            };
            Ok((v, d))
        }
        Node::Mul(a, b) => {
            let (va, da) = diff_node(a, z, zc, h, hc, mode)?;
            let (vb, db) = diff_node(b, z, zc, h, hc, mode)?;
            let d = &(&da * &vb) + &(&va * &db);
            Ok((&va * &vb, d))
        }
    }
}

fn diff_one(n: &Node) -> Vec<Word> {
    match n {
        Node::Const(_) => Vec::new(),
        Node::Var { var, center, pow } => {
            let tree = if *pow == 1 {
                None
            } else {
                Some(Node::Var {
                    var: *var,
                    center: center.clone(),
                    pow: pow - 1,
                })
            };
            vec![Word {
                scale: *pow as f64,
                tree,
            }]
        }
        Node::Ln { center } => vec![Word::from_node(Node::Var {
            var: Var::Z,
            center: center.clone(),
            pow: -1,
        })],
        Node::Mul(a, b) => {
            let mut out = Vec::new();
            for da in diff_one(a) {
                let (s, tree) = mul_trees(da.tree, Some((**b).clone()));
                out.push(Word {
                    scale: da.scale * s,
                    tree,
                });
            }
            for db in diff_one(b) {
                let (s, tree) = mul_trees(Some((**a).clone()), db.tree);
                out.push(Word {
                    scale: db.scale * s,
                    tree,
                });
            }
            out
        }
    }
}
