//! Expression grammar shared by rendering, configs and the CLI.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exp)?
//! exp    := int | '-' int | '(' '-'? int ('/' int)? ')'
//! atom   := int | 'i' | 'q' | 't' | gen | gen '*' | symbol | '(' expr ')'
//! ```
//!
//! A generator immediately followed by `*` denotes its adjoint unless the
//! next character starts an operand, so `Z*W` is a product and `Z**W` is
//! `Z^* W`. Only `q` accepts half-integer exponents.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgElement, AlgebraSpec, Coeff, Generator, Symbol};
use crate::error::{Error, Result};
use crate::scalars::{imaginary_unit, q_half_pow, scalar_rational, Scalar};

/// Unnormalized expression tree.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    I,
    Q,
    T,
    Gen(Generator),
    Sym(Symbol),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// `base ^ (num / den)` with `den` in `{1, 2}`.
    Pow(Box<Expr>, i64, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn is_operand_start(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'(' || c == b'_'
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
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
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let (num, den) = if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.small_int()?;
            let d = if self.eat(b'/') { self.small_int()? } else { 1 };
            self.expect(b')')?;
            (if neg { -n } else { n }, d)
        } else {
            let neg = self.eat(b'-');
            let n = self.small_int()?;
            (if neg { -n } else { n }, 1)
        };
        if den != 1 && den != 2 {
            return self.err("exponent denominator must be 1 or 2");
        }
        if den == 2 && num % 2 != 0 && base != Expr::Q {
            return self.err("half-integer exponents are only allowed on q");
        }
        let (num, den) = if den == 2 && num % 2 == 0 { (num / 2, 1) } else { (num, den) };
        Ok(Expr::Pow(Box::new(base), num, den))
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn small_int(&mut self) -> Result<i64> {
        match self.digits() {
            Some(d) => d.parse().or_else(|_| self.err("exponent too large")),
            None => self.err("expected an integer"),
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    /// Consumes a postfix adjoint marker after a generator name.
    fn star_suffix(&mut self) -> bool {
        if self.src.get(self.pos) == Some(&b'*') {
            let next = self.src.get(self.pos + 1).copied();
            if !next.is_some_and(is_operand_start) {
                self.pos += 1;
                return true;
            }
        }
        false
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                Ok(Expr::Int(d.parse().unwrap()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                let gen = |g: Generator, star: bool| Expr::Gen(if star { g.star() } else { g });
                let e = match name {
                    "i" => Expr::I,
                    "q" => Expr::Q,
                    "t" => Expr::T,
                    "U" | "V" | "Z" | "W" => {
                        let g = match name {
                            "U" => Generator::U,
                            "V" => Generator::V,
                            "Z" => Generator::Z,
                            _ => Generator::W,
                        };
                        let star = self.star_suffix();
                        gen(g, star)
                    }
                    "K" => Expr::Sym(Symbol::K),
                    "Kinv" => Expr::Sym(Symbol::KInv),
                    _ => match parse_symbol_index(name) {
                        Some(s) => Expr::Sym(s),
                        None => {
                            self.pos = start;
                            return self.err(format!("unknown identifier `{name}`"));
                        }
                    },
                };
                Ok(e)
            }
            Some(c) => self.err(format!("unexpected character `{}`", c as char)),
        }
    }
}

fn parse_symbol_index(name: &str) -> Option<Symbol> {
    let idx = name.strip_prefix("K_")?;
    let digits: Vec<u8> = idx.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    let valid = |d: u8| (1..=super::FORMAL_INDICES).contains(&d);
    match digits.as_slice() {
        [a] if valid(*a) => Some(Symbol::D(*a)),
        [a, b] if valid(*a) && valid(*b) => Some(Symbol::second(*a, *b)),
        _ => None,
    }
}

/// Parses text into an unnormalized expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn uses(e: &Expr, torus: &mut bool, sphere: &mut bool) {
    match e {
        Expr::Gen(g) => {
            if g.is_torus() {
                *torus = true
            } else {
                *sphere = true
            }
        }
        Expr::T => *sphere = true,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            uses(a, torus, sphere);
            uses(b, torus, sphere);
        }
        Expr::Neg(a) | Expr::Pow(a, ..) => uses(a, torus, sphere),
        _ => {}
    }
}

/// Evaluates an expression to canonical form in the given algebra.
pub fn normalize(e: &Expr, spec: AlgebraSpec) -> Result<AlgElement> {
    let (mut torus, mut sphere) = (false, false);
    uses(e, &mut torus, &mut sphere);
    if torus && sphere {
        return Err(Error::MixedAlgebras(
            "T2_theta generators".into(),
            "S3_theta generators".into(),
        ));
    }
    eval(e, spec)
}

fn scalar_elem(spec: AlgebraSpec, s: Scalar) -> AlgElement {
    AlgElement::scalar(spec, s)
}

fn eval(e: &Expr, spec: AlgebraSpec) -> Result<AlgElement> {
    Ok(match e {
        Expr::Int(n) => scalar_elem(spec, scalar_rational(BigRational::from_integer(n.clone()))),
        Expr::I => scalar_elem(spec, imaginary_unit()),
        Expr::Q => scalar_elem(spec, q_half_pow(2)),
        Expr::T => AlgElement::t(spec)?,
        Expr::Gen(g) => AlgElement::generator(spec, *g)?,
        Expr::Sym(s) => AlgElement::symbol(spec, *s)?,
        Expr::Add(a, b) => eval(a, spec)?.checked_add(&eval(b, spec)?)?,
        Expr::Sub(a, b) => eval(a, spec)?.checked_sub(&eval(b, spec)?)?,
        Expr::Mul(a, b) => eval(a, spec)?.checked_mul(&eval(b, spec)?)?,
        Expr::Div(a, b) => {
            let d = eval(b, spec)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            eval(a, spec)?.checked_mul(&d.invert()?)?
        }
        Expr::Neg(a) => -&eval(a, spec)?,
        Expr::Pow(base, num, den) => {
            if *den == 2 {
                // only q reaches here (checked by the parser)
                scalar_elem(spec, q_half_pow(*num))
            } else if **base == Expr::Q {
                scalar_elem(spec, q_half_pow(2 * num))
            } else {
                let b = eval(base, spec)?;
                if b.is_zero() && *num < 0 {
                    return Err(Error::DivisionByZero);
                }
                b.pow(*num)?
            }
        }
    })
}

/// Parses and normalizes in one step.
pub fn parse_element(text: &str, spec: AlgebraSpec) -> Result<AlgElement> {
    normalize(&parse_expr(text)?, spec)
}

/// Parses a scalar (an expression without generators).
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let e = parse_element(text, AlgebraSpec::torus())?;
    e.as_scalar().ok_or_else(|| Error::Invalid(format!("`{text}` is not a scalar")))
}

/// Parses a central coefficient (an expression in scalars and `t`).
pub fn parse_coeff(text: &str) -> Result<Coeff> {
    let e = parse_element(text, AlgebraSpec::sphere3_loc())?;
    e.as_central()
        .ok_or_else(|| Error::Invalid(format!("`{text}` is not central")))
}
