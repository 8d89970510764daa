//! Exact polynomials in ℚ[t].
//!
//! The torus parameter θ is modeled as a formal transcendental `t`, so every
//! angle that appears in the library is a polynomial with rational
//! coefficients. No floating point anywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Reduce a rational into the half-open interval `[0, 1)`.
pub fn rat_mod1(r: &BigRational) -> BigRational {
    r - r.floor()
}

/// Render a rational as `p/q`, or just `p` when the denominator is 1.
pub fn fmt_rational(r: &BigRational) -> String {
    r.to_string()
}

/// A polynomial in ℚ[t], kept sparse with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct RatPoly {
    coeffs: BTreeMap<u32, BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        RatPoly { coeffs }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// The monomial `c * t^deg`.
    pub fn term(c: BigRational, deg: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        RatPoly { coeffs }
    }

    /// The variable `t` itself.
    pub fn t() -> Self {
        Self::term(BigRational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, deg: u32) -> BigRational {
        self.coeffs.get(&deg).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// Constant coefficient.
    pub fn constant_part(&self) -> BigRational {
        self.coeff(0)
    }

    /// The part of the polynomial with degree ≥ 1.
    pub fn upper_part(&self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().filter(|(d, _)| **d >= 1).map(|(d, c)| (*d, c.clone())).collect(),
        }
    }

    /// True when the polynomial is a constant integer.
    pub fn is_integer(&self) -> bool {
        match self.coeffs.len() {
            0 => true,
            1 => self.coeffs.get(&0).map(|c| c.is_integer()).unwrap_or(false),
            _ => false,
        }
    }

    pub fn scale(&self, r: &BigRational) -> RatPoly {
        if r.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * r)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> RatPoly {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    fn insert_add(coeffs: &mut BTreeMap<u32, BigRational>, deg: u32, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = coeffs.entry(deg).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            coeffs.remove(&deg);
        }
    }

    /// Solve `self = a + b * theta` for rationals `a`, `b`.
    ///
    /// Requires the degree ≥ 1 part of `theta` to be nonzero; returns `None`
    /// when the upper parts are not proportional.
    pub fn decompose_affine(&self, theta: &RatPoly) -> Option<(BigRational, BigRational)> {
        let th_up = theta.upper_part();
        let my_up = self.upper_part();
        let b = if my_up.is_zero() {
            BigRational::zero()
        } else {
            // ratio on the lowest common degree, then verify exactly
            let d = my_up.degrees().next()?;
            let tc = th_up.coeff(d);
            if tc.is_zero() {
                return None;
            }
            my_up.coeff(d) / tc
        };
        if th_up.scale(&b) != my_up {
            return None;
        }
        let a = self.constant_part() - b.clone() * theta.constant_part();
        Some((a, b))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        for (d, c) in &rhs.coeffs {
            RatPoly::insert_add(&mut coeffs, *d, c);
        }
        RatPoly { coeffs }
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let mut coeffs = self.coeffs.clone();
        for (d, c) in &rhs.coeffs {
            RatPoly::insert_add(&mut coeffs, *d, &(-c));
        }
        RatPoly { coeffs }
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl fmt::Display for RatPoly {
    /// Canonical text form: terms in ascending degree, e.g. `1/2 + t/2 - 3*t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *d == 0 {
                write!(f, "{}", fmt_rational(&abs))?;
            } else {
                if !abs.numer().is_one() {
                    write!(f, "{}*", abs.numer())?;
                }
                if *d == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{}", d)?;
                }
                if !abs.denom().is_one() {
                    write!(f, "/{}", abs.denom())?;
                }
            }
        }
        Ok(())
    }
}

// ------------------------------------------------------------------
// Parsing
// ------------------------------------------------------------------

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(src: &'a str) -> Self {
        PolyParser { src: src.as_bytes(), pos: 0 }
    }

    fn error(&self, message: &str) -> Error {
        Error::PolySyntax {
            position: self.pos,
            message: message.to_string(),
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|_| self.error("invalid number"))
    }

    /// rational := uint ['/' uint]
    fn parse_rational(&mut self) -> Result<BigRational> {
        let numer = self.parse_uint()?;
        if self.peek() == Some(b'/') {
            let save = self.pos;
            self.pos += 1;
            // only treat as division if digits follow; otherwise back off
            if self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
                let denom = self.parse_uint()?;
                if denom.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                return Ok(BigRational::new(numer, denom));
            }
            self.pos = save;
        }
        Ok(BigRational::from_integer(numer))
    }

    /// tpow := 't' ['^' uint]
    fn parse_tpow(&mut self) -> Result<RatPoly> {
        self.skip_ws();
        if self.bump() != Some(b't') {
            return Err(self.error("expected 't'"));
        }
        let mut deg: u32 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let d = self.parse_uint()?;
            deg = u32::try_from(&d).map_err(|_| self.error("exponent too large"))?;
        }
        Ok(RatPoly::term(BigRational::one(), deg))
    }

    /// primary := rational ['*' tpow] | tpow | '(' poly ')'
    fn parse_primary(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b't') => self.parse_tpow(),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_poly()?;
                if self.bump() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.parse_rational()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let t = self.parse_tpow()?;
                    Ok(t.scale(&r))
                } else {
                    Ok(RatPoly::constant(r))
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }

    /// term := primary {'/' uint}
    fn parse_term(&mut self) -> Result<RatPoly> {
        let mut p = self.parse_primary()?;
        while self.peek() == Some(b'/') {
            self.pos += 1;
            let q = self.parse_uint()?;
            if q.is_zero() {
                return Err(self.error("zero denominator"));
            }
            p = p.scale(&BigRational::new(BigInt::one(), q));
        }
        Ok(p)
    }

    /// poly := ['-'] term {('+'|'-') term}
    fn parse_poly(&mut self) -> Result<RatPoly> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            -&self.parse_term()?
        } else {
            self.parse_term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.parse_term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.parse_term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_complete(&mut self) -> Result<RatPoly> {
        let p = self.parse_poly()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(p)
    }
}

impl FromStr for RatPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PolyParser::new(s).parse_complete()
    }
}
