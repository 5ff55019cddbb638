//! Recursive-descent front end for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := ("-" | "+") unary | power
//! power := atom ("^" INT)?
//! atom  := NUMBER | "z1" | "z2" | "i" | "(" expr ")"
//!        | ("conj" | "Re" | "Im") "(" expr ")" | "|" expr "|"
//! ```
//!
//! A modulus `|e|` must be raised to an even power. Division is only by constants.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::polyalg::{conj_pairs, CRat, Exp, MixedPolynomial, Rat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("modulus raised to an odd or missing power at {pos}; |e|^k needs even k")]
    NonPolynomialModulus { pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut value = Rat::from_integer(int.parse::<BigInt>().expect("digits"));
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                let den = BigInt::from(10).pow(frac.len() as u32);
                value += Rat::new(frac.parse::<BigInt>().expect("digits"), den);
            }
            out.push((start, Tok::Num(value)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()|".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<MixedPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MixedPolynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Sym('/')) {
                self.at += 1;
                let pos = self.pos();
                let d = self.unary()?;
                let c = as_constant(&d).filter(|c| !c.is_zero());
                match c.and_then(|c| c.inv()) {
                    Some(inv) => acc = acc.scale(&inv),
                    None => return Err(ParseError::Syntax { pos, msg: "division by a non-constant or zero".into() }),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MixedPolynomial, ParseError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<Option<u32>, ParseError> {
        if !self.eat('^') {
            return Ok(None);
        }
        match self.peek().cloned() {
            Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => {
                self.at += 1;
                let k: u32 = n
                    .to_integer()
                    .try_into()
                    .map_err(|_| ParseError::Syntax { pos: self.pos(), msg: "exponent too large".into() })?;
                Ok(Some(k))
            }
            _ => self.err("expected a nonnegative integer exponent"),
        }
    }

    fn power(&mut self) -> Result<MixedPolynomial, ParseError> {
        if self.peek() == Some(&Tok::Sym('|')) {
            let pos = self.pos();
            self.at += 1;
            let inner = self.expr()?;
            self.expect('|')?;
            return match self.exponent()? {
                Some(k) if k % 2 == 0 => Ok(inner.mul(&inner.conj()).pow(k / 2)),
                _ => Err(ParseError::NonPolynomialModulus { pos }),
            };
        }
        let base = self.atom()?;
        match self.exponent()? {
            Some(k) => Ok(base.pow(k)),
            None => Ok(base),
        }
    }

    fn atom(&mut self) -> Result<MixedPolynomial, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(MixedPolynomial::constant(CRat::real(n)))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "z1" => Ok(MixedPolynomial::z1()),
                    "z2" => Ok(MixedPolynomial::z2()),
                    "i" => Ok(MixedPolynomial::constant(CRat::i())),
                    "conj" | "Re" | "Im" => {
                        self.expect('(')?;
                        let e = self.expr()?;
                        self.expect(')')?;
                        Ok(match name.as_str() {
                            "conj" => e.conj(),
                            "Re" => e.re(),
                            _ => e.im(),
                        })
                    }
                    _ => {
                        self.at -= 1;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn as_constant(p: &MixedPolynomial) -> Option<CRat> {
    if p.is_zero() {
        return Some(CRat::zero());
    }
    if p.len() == 1 {
        let c = p.coeff(&[0, 0, 0, 0]);
        if !c.is_zero() {
            return Some(c);
        }
    }
    None
}

pub fn parse_expression(src: &str) -> Result<MixedPolynomial, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() && !r.is_negative() {
        format!("{}", r.numer())
    } else if r.is_integer() {
        format!("({})", r.numer())
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

fn monomial_text(e: &Exp) -> String {
    let mut parts = Vec::new();
    let names = ["z1", "conj(z1)", "z2", "conj(z2)"];
    for (i, n) in names.iter().enumerate() {
        match e[i] {
            0 => {}
            1 => parts.push(n.to_string()),
            k => parts.push(format!("{n}^{k}")),
        }
    }
    parts.join("*")
}

fn modulus_text(e: &Exp) -> String {
    let mut parts = Vec::new();
    if e[0] > 0 {
        parts.push(format!("|z1|^{}", 2 * e[0]));
    }
    if e[2] > 0 {
        parts.push(format!("|z2|^{}", 2 * e[2]));
    }
    parts.join("*")
}

fn with_coeff(c: &Rat, body: String) -> String {
    if body.is_empty() {
        fmt_rat(c)
    } else if c.is_one() {
        body
    } else {
        format!("{}*{}", fmt_rat(c), body)
    }
}

/// Canonical text that [`parse_expression`] maps back to the same polynomial.
///
/// Real-valued input is printed with `Re`/`Im`/`|.|` only; other input uses `i`.
pub fn print_expression(p: &MixedPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    if p.is_real_valued() {
        for (e, c, selfconj) in conj_pairs(p) {
            if selfconj {
                parts.push(with_coeff(&c.re, modulus_text(&e)));
            } else {
                let m = monomial_text(&e);
                let two = Rat::from_integer(BigInt::from(2));
                if !c.re.is_zero() {
                    parts.push(with_coeff(&(&c.re * &two), format!("Re({m})")));
                }
                if !c.im.is_zero() {
                    parts.push(with_coeff(&(-&c.im * &two), format!("Im({m})")));
                }
            }
        }
    } else {
        for (e, c) in p.terms() {
            let m = monomial_text(e);
            if !c.re.is_zero() {
                parts.push(with_coeff(&c.re, m.clone()));
            }
            if !c.im.is_zero() {
                let body = if m.is_empty() { "i".to_string() } else { format!("i*{m}") };
                parts.push(with_coeff(&c.im, body));
            }
        }
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, rat_int};

    #[test]
    fn example_polynomial() {
        let p = parse_expression("|z1|^6*|z2|^2 + |z1|^8 + (15/7)*|z1|^2*Re(z1^6) + |z2|^10").unwrap();
        let want = MixedPolynomial::modulus_term(3, 1, rat_int(1))
            .add(&MixedPolynomial::modulus_term(4, 0, rat_int(1)))
            .add(&MixedPolynomial::modulus_term(1, 0, rat(15, 7)).mul(&MixedPolynomial::z1().pow(6).re()))
            .add(&MixedPolynomial::modulus_term(0, 5, rat_int(1)));
        assert_eq!(p, want);
        assert!(p.is_real_valued());
    }

    #[test]
    fn re_of_square() {
        let p = parse_expression("Re(z1^2)").unwrap();
        let want =
            MixedPolynomial::from_terms([([2, 0, 0, 0], CRat::from_frac(1, 2)), ([0, 2, 0, 0], CRat::from_frac(1, 2))]);
        assert_eq!(p, want);
    }

    #[test]
    fn odd_modulus_rejected() {
        assert!(matches!(parse_expression("|z1|^3"), Err(ParseError::NonPolynomialModulus { .. })));
        assert!(matches!(parse_expression("|z1|"), Err(ParseError::NonPolynomialModulus { .. })));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_expression("z1 + * z2") {
            Err(ParseError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_expression("z3").is_err());
        assert!(parse_expression("z1/z2").is_err());
        assert!(parse_expression("(z1").is_err());
    }

    #[test]
    fn nested_moduli_and_decimals() {
        let p = parse_expression("||z1|^2 - z2|^2").unwrap();
        assert!(p.is_real_valued());
        let q = parse_expression("0.25*z1").unwrap();
        assert_eq!(q, MixedPolynomial::z1().scale(&CRat::from_frac(1, 4)));
    }

    #[test]
    fn printing_round_trips() {
        for src in ["|z1|^6*|z2|^2 - (3/2)*Im(z1^2*conj(z2))", "z1^2 + i*z2", "0", "Re(z1*z2) + 7"] {
            let p = parse_expression(src).unwrap();
            let back = parse_expression(&print_expression(&p)).unwrap();
            assert_eq!(p, back, "{src}");
        }
    }
}
