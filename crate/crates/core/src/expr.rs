//! Exact expression grammar shared by every file format.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | name | 'sqrt' '(' ['-'] integer ')' | '(' expr ')'
//! ```
//!
//! `p/q` is ordinary division of integer literals. `w` names the generator of
//! the declared field; other names are variables for polynomial contexts.
//! `^` with a non-negative integer exponent is accepted as shorthand for
//! repeated multiplication.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{Elem, FieldDescriptor, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Name(String),
    Sqrt(BigInt),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Int(lit.parse().unwrap()));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at token {} in `{}`", self.pos, self.src))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e = n.to_u32().ok_or_else(|| self.err("exponent too large"))?;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return Err(self.err("expected integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(name)) if name == "sqrt" => {
                self.pos += 1;
                if !self.eat('(') {
                    return Err(self.err("expected `(` after sqrt"));
                }
                let neg = self.eat('-');
                let n = match self.peek().cloned() {
                    Some(Tok::Int(n)) => n,
                    _ => return Err(self.err("sqrt takes an integer literal")),
                };
                self.pos += 1;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(Expr::Sqrt(if neg { -n } else { n }))
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                Ok(Expr::Name(name))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        src: s,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// Parses `lhs = rhs` as `lhs - rhs`, or a bare expression.
pub fn parse_equation(s: &str) -> Result<Expr> {
    match s.split_once('=') {
        Some((l, r)) => Ok(Expr::Sub(Box::new(parse(l)?), Box::new(parse(r)?))),
        None => parse(s),
    }
}

/// Field context for evaluating element expressions. A context without a
/// declared field adopts `Q(sqrt D)` at the first irrational `sqrt(D)`.
#[derive(Clone, Debug, Default)]
pub struct ElemContext {
    pub field: Option<Arc<FieldDescriptor>>,
}

impl ElemContext {
    pub fn new(field: Option<Arc<FieldDescriptor>>) -> Self {
        ElemContext { field }
    }

    pub fn eval(&mut self, e: &Expr) -> Result<Elem> {
        Ok(match e {
            Expr::Int(n) => Elem::rational(Rational::from_integer(n.clone())),
            Expr::Name(n) if n == "w" => match &self.field {
                Some(f) => Elem::generator(f),
                None => return Err(Error::Parse("`w` used without a field declaration".into())),
            },
            Expr::Name(n) => return Err(Error::Parse(format!("unknown name `{n}`"))),
            Expr::Sqrt(d) => {
                let q = Rational::from_integer(d.clone());
                if let Some(r) = crate::algebra::rational::rational_sqrt(&q) {
                    return Ok(Elem::rational(r));
                }
                if self.field.is_none() {
                    let d = d
                        .to_i64()
                        .ok_or_else(|| Error::Parse("sqrt argument too large".into()))?;
                    self.field = Some(FieldDescriptor::quadratic(d)?);
                }
                let f = self.field.as_ref().unwrap();
                f.sqrt_of(&q).ok_or_else(|| {
                    Error::Parse(format!("sqrt({d}) does not lie in {}", f.name()))
                })?
            }
            Expr::Neg(a) => -&self.eval(a)?,
            Expr::Add(a, b) => self.eval(a)?.checked_add(&self.eval(b)?)?,
            Expr::Sub(a, b) => self.eval(a)?.checked_sub(&self.eval(b)?)?,
            Expr::Mul(a, b) => self.eval(a)?.checked_mul(&self.eval(b)?)?,
            Expr::Div(a, b) => self.eval(a)?.checked_div(&self.eval(b)?)?,
            Expr::Pow(a, k) => self.eval(a)?.pow(*k),
        })
    }

    pub fn parse(&mut self, s: &str) -> Result<Elem> {
        self.eval(&parse(s)?)
    }
}

/// Parses a single element expression, inferring a quadratic field from `sqrt`.
pub fn parse_elem(s: &str, field: Option<&Arc<FieldDescriptor>>) -> Result<Elem> {
    ElemContext::new(field.cloned()).parse(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Poly;

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_elem("129/100", None).unwrap(), Elem::frac(129, 100));
        assert_eq!(parse_elem("-1/8", None).unwrap(), Elem::frac(-1, 8));
        assert_eq!(parse_elem("7^3*13^2", None).unwrap(), Elem::int(57967));
        assert_eq!(parse_elem("(1 - 3*3)/2", None).unwrap(), Elem::int(-4));
    }

    #[test]
    fn parses_radicals() {
        let e = parse_elem("4*sqrt(5)", None).unwrap();
        assert_eq!(&e * &e, Elem::int(80));
        assert_eq!(parse_elem("sqrt(16)", None).unwrap(), Elem::int(4));
        let k = FieldDescriptor::quadratic(3).unwrap();
        let a = parse_elem("sqrt(3)/4", Some(&k)).unwrap();
        assert_eq!(&a * &a, Elem::frac(3, 16));
        assert!(parse_elem("sqrt(5)", Some(&k)).is_err());
    }

    #[test]
    fn parses_generator() {
        let k = FieldDescriptor::new(&Poly::from_ints(&[-3, -1, -1, 1])).unwrap();
        let e = parse_elem("w*w*w", Some(&k)).unwrap();
        assert_eq!(e, parse_elem("w*w + w + 3", Some(&k)).unwrap());
        assert!(parse_elem("w", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        let k = FieldDescriptor::quadratic(33).unwrap();
        let u = parse_elem("(-1 + sqrt(33))/8", Some(&k)).unwrap();
        assert_eq!(parse_elem(&u.to_string(), Some(&k)).unwrap(), u);
    }

    #[test]
    fn rejects_malformed() {
        for s in ["", "1 +", "1/0", "(2", "2 $ 3", "sqrt(x)"] {
            assert!(parse_elem(s, None).is_err(), "{s}");
        }
    }
}
