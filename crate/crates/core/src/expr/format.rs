//! Text and JSON forms of phrases. Both reparse to an identical [`Phrase`].

use std::fmt::{self, Write};

use serde_json::{json, Map, Value};

use super::{Node, Phrase, Var, Word};
use crate::algebra::{AlgebraLevel, CDNumber};
use crate::error::{Error, Result};

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("0");
        }
        for (i, w) in self.words.iter().enumerate() {
            let neg = w.scale < 0.0;
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let s = w.scale.abs();
            match &w.tree {
                None => write!(f, "{s:?}")?,
                Some(t) => {
                    if s != 1.0 {
                        write!(f, "{s:?}*")?;
                    }
                    write_node(f, t)?;
                }
            }
        }
        Ok(())
    }
}

fn write_node(f: &mut impl Write, n: &Node) -> fmt::Result {
    match n {
        Node::Const(c) => write_const(f, c),
        Node::Var { var, center, pow } => {
            let name = match var {
                Var::Z => "z",
                Var::Zc => "zc",
            };
            if center.norm() == 0.0 {
                f.write_str(name)?;
                if *pow != 1 {
                    write!(f, "^{pow}")?;
                }
                Ok(())
            } else {
                f.write_str("(")?;
                write_shift(f, name, center)?;
                write!(f, ")^{pow}")
            }
        }
        Node::Ln { center } => {
            f.write_str("ln(")?;
            if center.norm() == 0.0 {
                f.write_str("z")?;
            } else {
                write_shift(f, "z", center)?;
            }
            f.write_str(")")
        }
        Node::Mul(a, b) => {
            write_node(f, a)?;
            f.write_str("*")?;
            if matches!(**b, Node::Mul(..)) {
                f.write_str("(")?;
                write_node(f, b)?;
                f.write_str(")")
            } else {
                write_node(f, b)
            }
        }
    }
}

fn write_shift(f: &mut impl Write, name: &str, c: &CDNumber) -> fmt::Result {
    if c.is_real() {
        if c.re() < 0.0 {
            write!(f, "{name} + {:?}", -c.re())
        } else {
            write!(f, "{name} - {:?}", c.re())
        }
    } else {
        write!(f, "{name} - ")?;
        write_const(f, c)
    }
}

/// `e3` for a unit basis element, otherwise a parenthesised sum.
fn write_const(f: &mut impl Write, c: &CDNumber) -> fmt::Result {
    let nz: Vec<(usize, f64)> = c
        .coeffs()
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, v)| v != 0.0)
        .collect();
    if let [(k, v)] = nz[..] {
        if k > 0 && v == 1.0 {
            return write!(f, "e{k}");
        }
    }
    f.write_str("(")?;
    for (i, &(k, v)) in nz.iter().enumerate() {
        match (i, v < 0.0) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        if k == 0 {
            write!(f, "{:?}", v.abs())?;
        } else {
            write!(f, "{:?}*e{k}", v.abs())?;
        }
    }
    f.write_str(")")
}

/// JSON tree: `{"op":"add"|"mul","args":[..]}`, `{"const":[..]}`,
/// `{"var":"z"|"zc","pow":n,"center":[..]}` (center optional) and
/// `{"fn":"ln","center":[..]}`.
pub fn to_json(p: &Phrase) -> Value {
    let args: Vec<Value> = p.words.iter().map(|w| word_json(p.level, w)).collect();
    json!({"op": "add", "args": args})
}

fn word_json(level: AlgebraLevel, w: &Word) -> Value {
    let scale = || json!({"const": CDNumber::real(level, w.scale)});
    match &w.tree {
        None => scale(),
        Some(t) if w.scale == 1.0 => node_json(t),
        Some(t) => json!({"op": "mul", "args": [scale(), node_json(t)]}),
    }
}

fn node_json(n: &Node) -> Value {
    match n {
        Node::Const(c) => json!({ "const": c }),
        Node::Var { var, center, pow } => {
            let mut m = Map::new();
            m.insert(
                "var".into(),
                json!(match var {
                    Var::Z => "z",
                    Var::Zc => "zc",
                }),
            );
            m.insert("pow".into(), json!(pow));
            if center.norm() != 0.0 {
                m.insert("center".into(), json!(center));
            }
            Value::Object(m)
        }
        Node::Ln { center } => json!({"fn": "ln", "center": center}),
        Node::Mul(a, b) => json!({"op": "mul", "args": [node_json(a), node_json(b)]}),
    }
}

pub fn from_json(v: &Value, level: AlgebraLevel) -> Result<Phrase> {
    let bad = |msg: &str| Error::Invalid(format!("expression JSON: {msg}"));
    let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
    let number = |key: &str| -> Result<CDNumber> {
        match obj.get(key) {
            None => Ok(CDNumber::zero(level)),
            Some(val) => {
                let c: CDNumber = serde_json::from_value(val.clone())
                    .map_err(|e| bad(&format!("`{key}`: {e}")))?;
                if c.level() != level {
                    return Err(bad(&format!(
                        "`{key}` has {} coefficients, expected {}",
                        c.coeffs().len(),
                        level.dim()
                    )));
                }
                Ok(c)
            }
        }
    };
    if let Some(op) = obj.get("op") {
        let args = obj
            .get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("`op` needs an `args` array"))?;
        let parts = args
            .iter()
            .map(|a| from_json(a, level))
            .collect::<Result<Vec<_>>>()?;
        return match op.as_str() {
            Some("add") => parts
                .iter()
                .try_fold(Phrase::zero(level), |acc, p| acc.add(p)),
            Some("mul") => {
                let mut it = parts.into_iter();
                let first = it.next().ok_or_else(|| bad("empty product"))?;
                it.try_fold(first, |acc, p| acc.mul(&p))
            }
            _ => Err(bad("`op` must be \"add\" or \"mul\"")),
        };
    }
    if obj.contains_key("const") {
        return Ok(Phrase::constant(&number("const")?));
    }
    if let Some(var) = obj.get("var") {
        let var = match var.as_str() {
            Some("z") => Var::Z,
            Some("zc") => Var::Zc,
            _ => return Err(bad("`var` must be \"z\" or \"zc\"")),
        };
        let pow = match obj.get("pow") {
            None => 1,
            Some(p) => p
                .as_i64()
                .and_then(|p| i32::try_from(p).ok())
                .ok_or_else(|| bad("`pow` must be an integer"))?,
        };
        return Ok(Phrase::var(var, &number("center")?, pow));
    }
    if obj.get("fn").and_then(Value::as_str) == Some("ln") {
        return Ok(Phrase::ln(&number("center")?));
    }
    Err(bad("unrecognised node"))
}
