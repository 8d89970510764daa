//! Expression language for torus elements.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['-'] term { ('+' | '-') term }
//! term   := factor { '*' factor }
//! factor := atom { '^' int | "'" }
//! atom   := 'u' [index] | 'v' | 'e' '(' poly ')' | rational | '(' expr ')'
//! ```
//!
//! `u` and `v` name the first two generators; `u1`, `u2`, ... name them by
//! index in any dimension. `e(p)` is the unit scalar with phase exponent `p`,
//! a rational polynomial in `t`. The postfix `'` is the adjoint and binds
//! together with `^` as a left-to-right chain, so `u^2'` is `(u^2)*` while
//! `u'^2` is `(u*)^2`.
//!
//! Printing parenthesizes exactly where the grammar requires it, so
//! `parse(print(x)) == x` for every AST, including non-flattened sums and
//! products.

use std::fmt;
use std::str::FromStr;

use num::BigRational;

use crate::error::{Error, Result};
use crate::phase::{PhaseExponent, Scalar};
use crate::ratpoly::RatPoly;
use crate::torus::{ThetaMatrix, TorusElement};

/// Abstract syntax tree for torus expressions.
///
/// Structural invariants kept by the parser and expected by the printer:
/// `Prod` holds at least two factors, and `Sum` holds either at least two
/// terms or a single negated term (a leading unary minus).
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Generator by zero-based index; prints as `u`, `v`, `u3`, ...
    Gen(usize),
    /// Unit scalar `e(p)`.
    Phase(RatPoly),
    /// Nonnegative rational literal.
    Rational(BigRational),
    /// Integer power of a factor.
    Pow(Box<Expr>, i64),
    /// Adjoint of a factor.
    Adjoint(Box<Expr>),
    /// Product of two or more factors, in order.
    Prod(Vec<Expr>),
    /// Signed sum; `true` marks a subtracted term.
    Sum(Vec<(bool, Expr)>),
}

impl Expr {
    /// Evaluates the expression in the torus algebra over `theta`.
    pub fn eval(&self, theta: &ThetaMatrix) -> Result<TorusElement> {
        match self {
            Expr::Gen(k) => TorusElement::generator(theta, *k),
            Expr::Phase(p) => Ok(TorusElement::from_scalar(
                theta,
                Scalar::phase(PhaseExponent::new(p.clone())),
            )),
            Expr::Rational(r) => Ok(TorusElement::from_scalar(theta, Scalar::from_rational(r.clone()))),
            Expr::Adjoint(x) => Ok(x.eval(theta)?.adjoint()),
            Expr::Pow(x, k) => {
                let base = x.eval(theta)?;
                if base.single_term().is_some() {
                    return base.monomial_pow(*k);
                }
                if *k < 0 {
                    return Err(Error::Invalid(
                        "negative power requires a single monomial".into(),
                    ));
                }
                let mut out = TorusElement::one(theta);
                for _ in 0..*k {
                    out = out.mul(&base)?;
                }
                Ok(out)
            }
            Expr::Prod(xs) => {
                let mut out = xs[0].eval(theta)?;
                for x in &xs[1..] {
                    out = out.mul(&x.eval(theta)?)?;
                }
                Ok(out)
            }
            Expr::Sum(terms) => {
                let mut out = TorusElement::zero(theta);
                for (neg, x) in terms {
                    let v = x.eval(theta)?;
                    out = if *neg { out.sub(&v)? } else { out.add(&v)? };
                }
                Ok(out)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Sum(_) => 0,
            Expr::Prod(_) => 1,
            Expr::Pow(..) | Expr::Adjoint(_) => 2,
            _ => 3,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Gen(0) => write!(f, "u"),
            Expr::Gen(1) => write!(f, "v"),
            Expr::Gen(k) => write!(f, "u{}", k + 1),
            Expr::Phase(p) => write!(f, "e({p})"),
            Expr::Rational(r) => {
                if num::One::is_one(r.denom()) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Expr::Pow(x, k) => {
                x.fmt_at(f, 2)?;
                write!(f, "^{k}")
            }
            Expr::Adjoint(x) => {
                x.fmt_at(f, 2)?;
                write!(f, "'")
            }
            Expr::Prod(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    // A nested product keeps its parentheses so the tree
                    // shape survives the round trip.
                    x.fmt_at(f, 2)?;
                }
                Ok(())
            }
            Expr::Sum(terms) => {
                for (i, (neg, x)) in terms.iter().enumerate() {
                    if i == 0 {
                        if *neg {
                            write!(f, "-")?;
                        }
                    } else {
                        f.write_str(if *neg { " - " } else { " + " })?;
                    }
                    x.fmt_at(f, 1)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

/// Parses an expression source string into an AST.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and evaluates an expression over `theta`.
pub fn eval_expr(src: &str, theta: &ThetaMatrix) -> Result<TorusElement> {
    parse_expr(src)?.eval(theta)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::ExprSyntax { position: self.pos, message: message.into() }
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let lead_neg = self.eat(b'-');
        let first = self.term()?;
        let mut terms = vec![(lead_neg, first)];
        loop {
            if self.eat(b'+') {
                terms.push((false, self.term()?));
            } else if self.eat(b'-') {
                terms.push((true, self.term()?));
            } else {
                break;
            }
        }
        if terms.len() == 1 && !terms[0].0 {
            Ok(terms.pop().expect("one term").1)
        } else {
            Ok(Expr::Sum(terms))
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().expect("one factor"))
        } else {
            Ok(Expr::Prod(factors))
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let mut x = self.atom()?;
        loop {
            if self.eat(b'^') {
                x = Expr::Pow(Box::new(x), self.int()?);
            } else if self.eat(b'\'') {
                x = Expr::Adjoint(Box::new(x));
            } else {
                return Ok(x);
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.eat(b'-');
        let digits = self.digits()?;
        let v: i64 = digits
            .parse()
            .map_err(|_| self.err("exponent out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a digit"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .to_string())
    }

    fn atom(&mut self) -> Result<Expr> {
        let Some(c) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            b'u' => {
                self.pos += 1;
                if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                    let at = self.pos;
                    let idx: usize = self
                        .digits()?
                        .parse()
                        .map_err(|_| Error::ExprSyntax {
                            position: at,
                            message: "generator index out of range".into(),
                        })?;
                    if idx == 0 {
                        return Err(Error::ExprSyntax {
                            position: at,
                            message: "generator indices start at 1".into(),
                        });
                    }
                    Ok(Expr::Gen(idx - 1))
                } else {
                    Ok(Expr::Gen(0))
                }
            }
            b'v' => {
                self.pos += 1;
                Ok(Expr::Gen(1))
            }
            b'e' => {
                self.pos += 1;
                if !self.eat(b'(') {
                    return Err(self.err("expected '(' after e"));
                }
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos] != b')' {
                    self.pos += 1;
                }
                if self.pos == self.src.len() {
                    return Err(self.err("unterminated phase: expected ')'"));
                }
                let inner = std::str::from_utf8(&self.src[start..self.pos])
                    .map_err(|_| self.err("phase must be ascii"))?;
                let poly = RatPoly::from_str(inner).map_err(|e| match e {
                    Error::PolySyntax { position, message } => Error::ExprSyntax {
                        position: start + position,
                        message,
                    },
                    other => other,
                })?;
                self.pos += 1;
                Ok(Expr::Phase(poly))
            }
            b'0'..=b'9' => {
                let numer = self.digits()?;
                let mut denom = "1".to_string();
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    denom = self.digits()?;
                }
                let n: num::BigInt = numer.parse().expect("digits");
                let d: num::BigInt = denom.parse().expect("digits");
                if num::Zero::is_zero(&d) {
                    return Err(self.err("zero denominator"));
                }
                Ok(Expr::Rational(BigRational::new(n, d)))
            }
            _ => Err(self.err("expected a generator, scalar, phase, or '('")),
        }
    }
}
