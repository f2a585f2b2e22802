//! Recursive-descent parser.
//!
//! ```text
//! phrase = term { ("+" | "-") term } ;
//! term   = factor { "*" factor } ;             left-associative
//! factor = "-" factor | scalar | basis | var | "ln" "(" phrase ")"
//!        | "(" phrase ")" [ "^" integer ] ;
//! var    = ("z" | "zc") [ "^" integer ] ;
//! basis  = "e" index [ "^" integer ] ;
//! ```
//!
//! `(v - c)^n` with `v` a bare variable becomes a single shifted leaf. Any
//! other parenthesised group raised to `n >= 0` is expanded into an
//! `n`-factor product; a group made only of constants is folded to one
//! constant.

use super::{Phrase, Var, Word};
use crate::algebra::{AlgebraLevel, CDNumber};
use crate::error::{Error, Result};

const MAX_EXPONENT: i64 = 4096;
const MAX_WORDS: usize = 20_000;

pub fn parse(text: &str, level: AlgebraLevel) -> Result<Phrase> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        level,
    };
    let phrase = p.phrase()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(phrase)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    level: AlgebraLevel,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn phrase(&mut self) -> Result<Phrase> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Phrase> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let rhs = self.factor()?;
            acc = self.checked_mul(&acc, &rhs)?;
        }
        Ok(acc)
    }

    fn checked_mul(&self, a: &Phrase, b: &Phrase) -> Result<Phrase> {
        if a.words().len().saturating_mul(b.words().len()) > MAX_WORDS {
            return Err(self.error("expansion too large"));
        }
        a.mul(b)
    }

    fn factor(&mut self) -> Result<Phrase> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.scale(-1.0))
            }
            Some(b'+') => {
                self.pos += 1;
                self.factor()
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.phrase()?;
                self.expect(b')')?;
                let inner = fold_constant(inner);
                match self.exponent()? {
                    None => Ok(inner),
                    Some(n) => self.group_power(inner, n),
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                Ok(Phrase::real(self.level, v))
            }
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected `{}`", c as char))),
        }
    }

    fn identifier(&mut self) -> Result<Phrase> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let ident = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        let zero = CDNumber::zero(self.level);
        match ident {
            "z" | "zc" => {
                let var = if ident == "z" { Var::Z } else { Var::Zc };
                let n = self.exponent()?.unwrap_or(1);
                Ok(Phrase::var(var, &zero, n))
            }
            "ln" => {
                self.expect(b'(')?;
                let inner = self.phrase()?;
                self.expect(b')')?;
                match inner.as_shift() {
                    Some((Var::Z, c)) => Ok(Phrase::ln(&c)),
                    _ => Err(Error::Syntax {
                        pos: start,
                        msg: "ln accepts only z - c".into(),
                    }),
                }
            }
            _ if ident.starts_with('e')
                && ident.len() > 1
                && ident[1..].bytes().all(|b| b.is_ascii_digit()) =>
            {
                let k: usize = ident[1..].parse().map_err(|_| Error::Syntax {
                    pos: start,
                    msg: format!("bad basis symbol `{ident}`"),
                })?;
                if k >= self.level.dim() {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!(
                            "basis symbol `{ident}` out of range for level {} (dimension {})",
                            self.level.r(),
                            self.level.dim()
                        ),
                    });
                }
                let b = CDNumber::basis(self.level, k)?;
                let n = self.exponent()?.unwrap_or(1);
                let v = b.powi(n)?;
                Ok(Phrase::constant(&v))
            }
            _ => Err(Error::Syntax {
                pos: start,
                msg: format!("unknown symbol `{ident}`"),
            }),
        }
    }

    fn exponent(&mut self) -> Result<Option<i32>> {
        if !self.eat(b'^') {
            return Ok(None);
        }
        self.skip_ws();
        let start = self.pos;
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.error("expected integer exponent"));
        }
        let text = std::str::from_utf8(&self.src[digits..self.pos]).expect("ascii");
        let overflow = || Error::Syntax {
            pos: start,
            msg: format!("exponent overflow (|n| > {MAX_EXPONENT})"),
        };
        let n: i64 = text.parse().map_err(|_| overflow())?;
        if n > MAX_EXPONENT {
            return Err(overflow());
        }
        Ok(Some(if neg { -(n as i32) } else { n as i32 }))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        let mut p = self.pos;
        digits(&mut p);
        if p < s.len() && s[p] == b'.' {
            p += 1;
            digits(&mut p);
        }
        // exponent part only when followed by digits, so `2*e1` stays a basis
        if p < s.len() && (s[p] == b'e' || s[p] == b'E') {
            let mut q = p + 1;
            if q < s.len() && (s[q] == b'+' || s[q] == b'-') {
                q += 1;
            }
            if q < s.len() && s[q].is_ascii_digit() {
                digits(&mut q);
                p = q;
            }
        }
        self.pos = p;
        let text = std::str::from_utf8(&s[start..p]).expect("ascii");
        text.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: format!("bad number `{text}`"),
        })
    }

    fn group_power(&self, inner: Phrase, n: i32) -> Result<Phrase> {
        if let Some(c) = inner.constant_value() {
            if n < 0 && c.norm() == 0.0 {
                return Err(self.error("negative power of zero"));
            }
            return Ok(Phrase::constant(&c.powi(n)?));
        }
        if let Some((var, c)) = inner.as_shift() {
            return Ok(Phrase::var(var, &c, n));
        }
        if n < 0 {
            return Err(self.error(
                "negative powers are only supported for (z - c) and (zc - c)",
            ));
        }
        let mut acc = Phrase::real(self.level, 1.0);
        for _ in 0..n {
            acc = self.checked_mul(&acc, &inner)?;
        }
        Ok(acc)
    }
}

fn fold_constant(p: Phrase) -> Phrase {
    match p.constant_value() {
        Some(c) if p.words().len() > 1 => Phrase::from_words(p.level(), [Word::constant(&c)]),
        _ => p,
    }
}

#[cfg(test)]
mod tests {
    use super::super::Node;
    use super::*;

    fn o() -> AlgebraLevel {
        AlgebraLevel::OCTONION
    }

    #[test]
    fn shifted_powers_become_leaves() {
        let p = parse("(z - 1)^-2", o()).unwrap();
        assert_eq!(p.words().len(), 1);
        match &p.words()[0].tree {
            Some(Node::Var { var: Var::Z, center, pow: -2 }) => {
                assert_eq!(*center, CDNumber::one(o()))
            }
            other => panic!("{other:?}"),
        }
        let p = parse("(zc + e2)^3", o()).unwrap();
        assert!(matches!(
            &p.words()[0].tree,
            Some(Node::Var { var: Var::Zc, pow: 3, .. })
        ));
    }

    #[test]
    fn group_powers_expand() {
        let p = parse("(z + e1*z)^2", o()).unwrap();
        assert_eq!(p.words().len(), 4);
        assert!(parse("(z + e1*z)^-1", o()).is_err());
        assert_eq!(parse("(e1)^2", o()).unwrap(), Phrase::real(o(), -1.0));
        assert_eq!(parse("(z*e1)^0", o()).unwrap(), Phrase::real(o(), 1.0));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse("1.5e2", o()).unwrap(), Phrase::real(o(), 150.0));
        assert_eq!(parse(".25", o()).unwrap(), Phrase::real(o(), 0.25));
        let p = parse("2*e1", o()).unwrap();
        assert_eq!(p, Phrase::constant(&CDNumber::basis(o(), 1).unwrap().scale(2.0)));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("z +", o()), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("z ^ x", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("e8", o()), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("z^99999999999", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("foo", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(z", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("z)", o()), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse("ln(z*z)", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("", o()), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(0)^-1", o()), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unary_minus() {
        let a = parse("-z^2", o()).unwrap();
        assert_eq!(a, Phrase::z_pow(o(), 2).scale(-1.0));
        let b = parse("z*-e1", o()).unwrap();
        let c = parse("-(z*e1)", o()).unwrap();
        let z = CDNumber::basis(o(), 6).unwrap();
        assert_eq!(b.evaluate(&z).unwrap(), c.evaluate(&z).unwrap());
    }
}
