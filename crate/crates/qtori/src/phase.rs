//! Phases `e^{2πi p(θ)}` with `p ∈ ℚ[t]`, and the exact scalar ring built
//! from them.
//!
//! θ is treated as transcendental, so a phase is trivial exactly when its
//! exponent polynomial has integer constant part and no higher terms. The
//! constant coefficient is therefore kept reduced into `[0, 1)`; all other
//! coefficients are exact.
//!
//! [`Scalar`] is the group algebra of the phase group over ℚ: a finite formal
//! sum `Σ rᵢ·e(pᵢ)` with rational `rᵢ` and pairwise distinct canonical
//! phases. Rational constants make the phases roots of unity, which satisfy
//! cyclotomic relations such as `1 + e(1/3) + e(2/3) = 0`; equality and the
//! zero test reduce to a canonical cyclotomic basis so they decide numeric
//! equality, not just formal equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratpoly::{fmt_rational, rat_mod1, RatPoly};

/// Exponent of a phase `e^{2πi p(θ)}`, canonicalized so that the constant
/// coefficient lies in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PhaseExponent {
    poly: RatPoly,
}

impl PhaseExponent {
    /// Canonicalize an arbitrary exponent polynomial.
    pub fn new(poly: RatPoly) -> Self {
        let c = poly.constant_part();
        let reduced = rat_mod1(&c);
        let poly = &(&poly - &RatPoly::constant(c)) + &RatPoly::constant(reduced);
        PhaseExponent { poly }
    }

    pub fn zero() -> Self {
        PhaseExponent { poly: RatPoly::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(RatPoly::constant(r))
    }

    /// The phase of `e(c·t)`.
    pub fn from_t_coeff(c: BigRational) -> Self {
        Self::new(RatPoly::term(c, 1))
    }

    /// True when the phase `e^{2πi p(θ)}` equals 1.
    pub fn is_trivial(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn as_poly(&self) -> &RatPoly {
        &self.poly
    }

    /// Integer multiple of the phase (well defined on canonical forms).
    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(self.poly.scale_int(k))
    }
}

impl Add for &PhaseExponent {
    type Output = PhaseExponent;
    fn add(self, rhs: &PhaseExponent) -> PhaseExponent {
        PhaseExponent::new(&self.poly + &rhs.poly)
    }
}

impl Neg for &PhaseExponent {
    type Output = PhaseExponent;
    fn neg(self) -> PhaseExponent {
        PhaseExponent::new(-&self.poly)
    }
}

impl Sub for &PhaseExponent {
    type Output = PhaseExponent;
    fn sub(self, rhs: &PhaseExponent) -> PhaseExponent {
        PhaseExponent::new(&self.poly - &rhs.poly)
    }
}

impl fmt::Display for PhaseExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl FromStr for PhaseExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(PhaseExponent::new(s.parse::<RatPoly>()?))
    }
}

/// Finite formal sum `Σ r·e(p)` over canonical phases, no zero coefficients.
///
/// Rational constants in the phases are roots of unity, so distinct formal
/// sums can name the same number (`1 + e(1/2)` is 0).  Equality and the
/// zero test are therefore decided on the canonical cyclotomic form from
/// [`Scalar::canonical_terms`]; the formal term list is kept as written so
/// that monomial bookkeeping (`single_term`, `invert`) stays cheap.
#[derive(Clone, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<PhaseExponent, BigRational>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.canonical_terms() == other.canonical_terms()
    }
}

impl Eq for Scalar {}

/// Inverse of `a` modulo `m` for coprime inputs.
fn mod_inverse(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (m as i128, a.rem_euclid(m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inputs not coprime");
    i64::try_from(s0.rem_euclid(m as i128)).expect("modulus fits i64")
}

/// Rewrite `e(k/n)` in the canonical product basis of the cyclotomic field:
/// signed roots `e(a)` whose prime-power components `j/p^e` all satisfy
/// `j < φ(p^e)`.  Uses `Φ_{p^e}(x) = Σ_i x^{i·p^{e-1}}` to eliminate the
/// top exponents factor by factor.
fn expand_root(k: i64, n: i64) -> Vec<(BigRational, i64)> {
    debug_assert!(n >= 1 && (0..n).contains(&k));
    let mut result: Vec<(BigRational, i64)> = vec![(BigRational::zero(), 1)];
    let mut m = n;
    let mut p = 2i64;
    while m > 1 {
        if p * p > m {
            p = m;
        }
        if m % p != 0 {
            p += 1;
            continue;
        }
        let mut q = 1i64;
        while m % p == 0 {
            m /= p;
            q *= p;
        }
        // CRT component of k/n at this prime power.
        let rest = (n / q).rem_euclid(q);
        let j = i64::try_from(
            ((k.rem_euclid(q) as i128) * (mod_inverse(rest, q) as i128)).rem_euclid(q as i128),
        )
        .expect("component fits i64");
        let phi = q - q / p;
        let alternatives: Vec<(i64, i64)> = if j < phi {
            vec![(j, 1)]
        } else {
            (0..p - 1).map(|i| (j - phi + i * (q / p), -1)).collect()
        };
        result = result
            .iter()
            .flat_map(|(acc, sign)| {
                let q = q;
                alternatives
                    .iter()
                    .map(move |(jj, s)| (acc + BigRational::new(BigInt::from(*jj), BigInt::from(q)), sign * s))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    result.into_iter().map(|(r, s)| (rat_mod1(&r), s)).collect()
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::term(r, PhaseExponent::zero())
    }

    pub fn from_int(k: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(k)))
    }

    /// The pure phase `e(p)`.
    pub fn phase(p: PhaseExponent) -> Self {
        Scalar::term(BigRational::one(), p)
    }

    pub fn term(r: BigRational, p: PhaseExponent) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(p, r);
        }
        Scalar { terms }
    }

    /// True when the scalar is the number zero, deciding cyclotomic
    /// cancellations like `1 + e(1/2)` exactly.
    pub fn is_zero(&self) -> bool {
        self.canonical_terms().is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &Scalar::one()
    }

    /// The terms rewritten over the canonical cyclotomic basis: the rational
    /// constant of every phase has all prime-power components `j/p^e` with
    /// `j < φ(p^e)`.  Numerically equal scalars have identical canonical
    /// terms, so this decides equality.
    pub fn canonical_terms(&self) -> BTreeMap<PhaseExponent, BigRational> {
        let mut out = BTreeMap::new();
        for (p, c) in &self.terms {
            let q = p.as_poly().constant_part();
            let t_part = p.as_poly() - &RatPoly::constant(q.clone());
            let k = i64::try_from(q.numer()).expect("phase numerator too large to canonicalize");
            let n = i64::try_from(q.denom()).expect("phase denominator too large to canonicalize");
            for (root, sign) in expand_root(k, n) {
                let key = PhaseExponent::new(&t_part + &RatPoly::constant(root));
                let signed = if sign < 0 { -c.clone() } else { c.clone() };
                Self::insert_add(&mut out, key, &signed);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PhaseExponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Complex conjugate: negates every phase, keeps rational coefficients.
    pub fn conj(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(p, r)| (-p, r.clone())).collect(),
        }
    }

    pub fn single_term(&self) -> Option<(&PhaseExponent, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// True for `±1`-free unit phases: a single term `1·e(p)`.
    pub fn is_unit_phase(&self) -> bool {
        self.single_term().map(|(_, r)| r.is_one()).unwrap_or(false)
    }

    /// Multiplicative inverse of a single-term scalar.
    pub fn invert(&self) -> Option<Scalar> {
        let (p, r) = self.single_term()?;
        if r.is_zero() {
            return None;
        }
        Some(Scalar::term(r.recip(), -p))
    }

    fn insert_add(terms: &mut BTreeMap<PhaseExponent, BigRational>, p: PhaseExponent, r: &BigRational) {
        if r.is_zero() {
            return;
        }
        let entry = terms.entry(p).or_insert_with(BigRational::zero);
        *entry += r;
        if entry.is_zero() {
            let key = terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            terms.remove(&key);
        }
    }

    pub fn scale(&self, r: &BigRational) -> Scalar {
        if r.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * r)).collect(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (p, r) in &rhs.terms {
            Scalar::insert_add(&mut terms, p.clone(), r);
        }
        Scalar { terms }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut terms = self.terms.clone();
        for (p, r) in &rhs.terms {
            Scalar::insert_add(&mut terms, p.clone(), &(-r));
        }
        Scalar { terms }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(p, r)| (p.clone(), -r)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        for (p1, r1) in &self.terms {
            for (p2, r2) in &rhs.terms {
                Scalar::insert_add(&mut terms, p1 + p2, &(r1 * r2));
            }
        }
        Scalar { terms }
    }
}

impl fmt::Display for Scalar {
    /// Canonical text form, e.g. `1/2 + e(t) - 3*e(1/4 + t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.canonical_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, r) in &terms {
            let neg = r.is_negative();
            let abs = r.abs();
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
            if p.is_trivial() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "e({})", p)?;
            } else {
                write!(f, "{}*e({})", fmt_rational(&abs), p)?;
            }
        }
        Ok(())
    }
}

// ------------------------------------------------------------------
// Scalar parsing: sum := ['-'] term {('+'|'-') term}
//                 term := rational ['*' 'e(' poly ')'] | 'e(' poly ')'
// ------------------------------------------------------------------

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0usize;
        let err = |pos: usize, m: &str| Error::PolySyntax { position: pos, message: m.to_string() };

        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };

        let parse_rat = |pos: &mut usize| -> Result<BigRational> {
            skip_ws(pos);
            let start = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            if *pos == start {
                return Err(err(*pos, "expected a number"));
            }
            let numer: BigInt = std::str::from_utf8(&bytes[start..*pos]).unwrap().parse().unwrap();
            if *pos < bytes.len() && bytes[*pos] == b'/' {
                let save = *pos;
                *pos += 1;
                let dstart = *pos;
                while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                if *pos == dstart {
                    *pos = save;
                } else {
                    let denom: BigInt = std::str::from_utf8(&bytes[dstart..*pos]).unwrap().parse().unwrap();
                    if denom.is_zero() {
                        return Err(err(dstart, "zero denominator"));
                    }
                    return Ok(BigRational::new(numer, denom));
                }
            }
            Ok(BigRational::from_integer(numer))
        };

        let parse_phase = |pos: &mut usize| -> Result<PhaseExponent> {
            skip_ws(pos);
            if *pos >= bytes.len() || bytes[*pos] != b'e' {
                return Err(err(*pos, "expected 'e('"));
            }
            *pos += 1;
            skip_ws(pos);
            if *pos >= bytes.len() || bytes[*pos] != b'(' {
                return Err(err(*pos, "expected '(' after 'e'"));
            }
            *pos += 1;
            let start = *pos;
            let mut depth = 1usize;
            while *pos < bytes.len() {
                match bytes[*pos] {
                    b'(' => depth += 1,
                    b')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                *pos += 1;
            }
            if depth != 0 {
                return Err(err(*pos, "unclosed 'e('"));
            }
            let inner = std::str::from_utf8(&bytes[start..*pos]).unwrap();
            *pos += 1; // consume ')'
            inner.parse::<PhaseExponent>()
        };

        let parse_term = |pos: &mut usize| -> Result<Scalar> {
            skip_ws(pos);
            if *pos < bytes.len() && bytes[*pos] == b'e' {
                return Ok(Scalar::phase(parse_phase(pos)?));
            }
            let r = parse_rat(pos)?;
            skip_ws(pos);
            if *pos < bytes.len() && bytes[*pos] == b'*' {
                *pos += 1;
                let p = parse_phase(pos)?;
                return Ok(Scalar::term(r, p));
            }
            Ok(Scalar::from_rational(r))
        };

        skip_ws(&mut pos);
        let mut acc = if pos < bytes.len() && bytes[pos] == b'-' {
            pos += 1;
            -&parse_term(&mut pos)?
        } else {
            parse_term(&mut pos)?
        };
        loop {
            skip_ws(&mut pos);
            match bytes.get(pos) {
                Some(b'+') => {
                    pos += 1;
                    acc = &acc + &parse_term(&mut pos)?;
                }
                Some(b'-') => {
                    pos += 1;
                    acc = &acc - &parse_term(&mut pos)?;
                }
                Some(_) => return Err(err(pos, "unexpected trailing input")),
                None => break,
            }
        }
        Ok(acc)
    }
}
