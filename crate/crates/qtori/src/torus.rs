//! The quantum n-torus with exact formal arithmetic.
//!
//! Generators `u_1, ..., u_n` satisfy `u_k u_l = e(θ_{kl}) u_l u_k` for a
//! skew matrix θ over ℚ[t], with `t` a formal transcendental. Elements are
//! finitely supported Fourier series `Σ c_λ U(λ)` over `λ ∈ ℤⁿ`, where
//! `U(λ) = u_1^{λ_1} ⋯ u_n^{λ_n}` is the normally ordered monomial.
//!
//! Products follow `U(λ) U(μ) = e(σ(λ,μ)) U(λ+μ)` with the normal-ordering
//! cocycle `σ(λ,μ) = Σ_{k>l} λ_k θ_{kl} μ_l`.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::BigRational;
use num::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{rational_rank, IntMatrix};
use crate::phase::{PhaseExponent, Scalar};
use crate::ratpoly::{fmt_rational, RatPoly};

/// Skew matrix of commutation exponents over ℚ[t].
///
/// Entries are kept as raw polynomials, not reduced mod 1: distinct
/// integer translates such as `t-1`, `t`, `t+1` define isomorphic algebras
/// but are distinct covering data and must stay distinguishable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<RatPoly>,
}

impl ThetaMatrix {
    /// Build from a full row-major n×n table, validating exact skewness.
    pub fn new(n: usize, entries: Vec<RatPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        let m = ThetaMatrix { n, entries };
        for k in 0..n {
            for l in 0..=k {
                let skew = &(m.entry(k, l) + m.entry(l, k));
                if !skew.is_zero() {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(m)
    }

    /// Build from strictly upper-triangular entries `θ_{kl}` for `k < l`
    /// (0-based); the rest is filled in by skewness.
    pub fn from_upper(n: usize, upper: &[((usize, usize), RatPoly)]) -> Result<Self> {
        let mut entries = vec![RatPoly::zero(); n * n];
        for ((k, l), p) in upper {
            if *k >= *l || *l >= n {
                return Err(Error::Invalid(format!(
                    "upper entry index ({k},{l}) out of range for n={n}"
                )));
            }
            entries[k * n + l] = p.clone();
            entries[l * n + k] = -p;
        }
        ThetaMatrix::new(n, entries)
    }

    /// The 2-torus with `θ_{12} = t`.
    pub fn standard_2d() -> Self {
        Self::two_d(RatPoly::t())
    }

    /// The 2-torus with a chosen `θ_{12}`.
    pub fn two_d(theta12: RatPoly) -> Self {
        ThetaMatrix::from_upper(2, &[((0, 1), theta12)]).expect("2x2 skew construction")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, k: usize, l: usize) -> &RatPoly {
        &self.entries[k * self.n + l]
    }

    /// Strictly upper-triangular entries in row-major order.
    pub fn upper_entries(&self) -> Vec<((usize, usize), &RatPoly)> {
        let mut out = Vec::new();
        for k in 0..self.n {
            for l in k + 1..self.n {
                out.push(((k, l), self.entry(k, l)));
            }
        }
        out
    }

    /// Decide quite-irrationality: no nonzero `λ ∈ ℤⁿ` has `Θλ ∈ ℤⁿ`.
    ///
    /// With transcendental t this holds iff the stacked coefficient
    /// matrices of all degrees >= 1 have full rank n over ℚ: any rational
    /// kernel vector scales to a nonzero integer λ whose constant parts can
    /// be cleared into ℤ by a further integer multiple.
    pub fn is_quite_irrational(&self) -> bool {
        let mut degrees: Vec<u32> = self
            .entries
            .iter()
            .flat_map(|p| p.degrees())
            .filter(|&d| d >= 1)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for d in degrees {
            for k in 0..self.n {
                rows.push((0..self.n).map(|l| self.entry(k, l).coeff(d)).collect());
            }
        }
        rational_rank(&rows) == self.n
    }

    /// Normal-ordering cocycle `σ(λ,μ) = Σ_{k>l} λ_k θ_{kl} μ_l`.
    pub fn sigma(&self, lam: &[i64], mu: &[i64]) -> PhaseExponent {
        assert_eq!(lam.len(), self.n);
        assert_eq!(mu.len(), self.n);
        let mut p = RatPoly::zero();
        for k in 0..self.n {
            if lam[k] == 0 {
                continue;
            }
            for l in 0..k {
                if mu[l] == 0 {
                    continue;
                }
                p = &p + &self.entry(k, l).scale_int(lam[k] * mu[l]);
            }
        }
        PhaseExponent::new(p)
    }

    /// Antisymmetrized pairing: `U(λ)U(μ) = e(⟨λ,μ⟩_Θ) U(μ)U(λ)`, i.e.
    /// `Σ_{k≠l} λ_k θ_{kl} μ_l`.
    pub fn commutator_pairing(&self, lam: &[i64], mu: &[i64]) -> PhaseExponent {
        &self.sigma(lam, mu) - &self.sigma(mu, lam)
    }
}

/// An element of the quantum torus: finitely many terms `c_λ U(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement {
    theta: ThetaMatrix,
    terms: BTreeMap<Vec<i64>, Scalar>,
}

impl TorusElement {
    pub fn zero(theta: &ThetaMatrix) -> Self {
        TorusElement { theta: theta.clone(), terms: BTreeMap::new() }
    }

    pub fn one(theta: &ThetaMatrix) -> Self {
        Self::monomial(theta, vec![0; theta.dim()], Scalar::one())
    }

    pub fn monomial(theta: &ThetaMatrix, exponent: Vec<i64>, coeff: Scalar) -> Self {
        assert_eq!(exponent.len(), theta.dim(), "exponent length must match torus dimension");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        TorusElement { theta: theta.clone(), terms }
    }

    /// The generator `u_{k+1}` (0-based index).
    pub fn generator(theta: &ThetaMatrix, k: usize) -> Result<Self> {
        if k >= theta.dim() {
            return Err(Error::UnknownGenerator { index: k + 1, n: theta.dim() });
        }
        let mut e = vec![0i64; theta.dim()];
        e[k] = 1;
        Ok(Self::monomial(theta, e, Scalar::one()))
    }

    pub fn from_scalar(theta: &ThetaMatrix, s: Scalar) -> Self {
        Self::monomial(theta, vec![0; theta.dim()], s)
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.single_term()
            .map(|(lam, c)| lam.iter().all(|&x| x == 0) && c.is_one())
            .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.terms.keys()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, lam: &[i64]) -> Scalar {
        self.terms.get(lam).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn single_term(&self) -> Option<(&Vec<i64>, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn check_theta(&self, rhs: &TorusElement) -> Result<()> {
        if self.theta != rhs.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    fn insert_add(terms: &mut BTreeMap<Vec<i64>, Scalar>, lam: Vec<i64>, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match terms.get_mut(&lam) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    terms.remove(&lam);
                } else {
                    *existing = sum;
                }
            }
            None => {
                terms.insert(lam, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &TorusElement) -> Result<TorusElement> {
        self.check_theta(rhs)?;
        let mut terms = self.terms.clone();
        for (lam, c) in &rhs.terms {
            Self::insert_add(&mut terms, lam.clone(), c);
        }
        Ok(TorusElement { theta: self.theta.clone(), terms })
    }

    pub fn sub(&self, rhs: &TorusElement) -> Result<TorusElement> {
        self.check_theta(rhs)?;
        let mut terms = self.terms.clone();
        for (lam, c) in &rhs.terms {
            Self::insert_add(&mut terms, lam.clone(), &(-c));
        }
        Ok(TorusElement { theta: self.theta.clone(), terms })
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement {
            theta: self.theta.clone(),
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> TorusElement {
        if s.is_zero() {
            return TorusElement::zero(&self.theta);
        }
        TorusElement {
            theta: self.theta.clone(),
            terms: self.terms.iter().map(|(l, c)| (l.clone(), c * s)).collect(),
        }
    }

    /// Product in normal order.
    pub fn mul(&self, rhs: &TorusElement) -> Result<TorusElement> {
        self.check_theta(rhs)?;
        let mut terms = BTreeMap::new();
        for (lam, a) in &self.terms {
            for (mu, b) in &rhs.terms {
                let phase = Scalar::phase(self.theta.sigma(lam, mu));
                let coeff = &(a * b) * &phase;
                let sum: Vec<i64> = lam.iter().zip(mu).map(|(x, y)| x + y).collect();
                Self::insert_add(&mut terms, sum, &coeff);
            }
        }
        Ok(TorusElement { theta: self.theta.clone(), terms })
    }

    /// Adjoint: `U(λ)* = e(q(λ)) U(-λ)` with `q(λ) = Σ_{k>l} λ_k θ_{kl} λ_l`,
    /// extended conjugate-linearly.
    pub fn adjoint(&self) -> TorusElement {
        let mut terms = BTreeMap::new();
        for (lam, c) in &self.terms {
            let q = self.theta.sigma(lam, lam);
            let coeff = &c.conj() * &Scalar::phase(q);
            let neg: Vec<i64> = lam.iter().map(|&x| -x).collect();
            Self::insert_add(&mut terms, neg, &coeff);
        }
        TorusElement { theta: self.theta.clone(), terms }
    }

    /// Inverse of a single invertible monomial `c U(λ)`.
    pub fn monomial_inverse(&self) -> Result<TorusElement> {
        let (lam, c) = self
            .single_term()
            .ok_or_else(|| Error::Invalid("inverse requires a single monomial".into()))?;
        let cinv = c
            .invert()
            .ok_or_else(|| Error::Invalid("coefficient is not an invertible single term".into()))?;
        // U(λ) U(-λ) = e(σ(λ,-λ)) so U(λ)^{-1} = e(-σ(λ,-λ)) U(-λ).
        let phase = Scalar::phase(-&self.theta.sigma(lam, &lam.iter().map(|&x| -x).collect::<Vec<_>>()));
        let neg: Vec<i64> = lam.iter().map(|&x| -x).collect();
        Ok(TorusElement::monomial(&self.theta, neg, &cinv * &phase))
    }

    /// Integer power of a single monomial.
    pub fn monomial_pow(&self, k: i64) -> Result<TorusElement> {
        if self.single_term().is_none() {
            return Err(Error::Invalid("integer power requires a single monomial".into()));
        }
        let base = if k >= 0 { self.clone() } else { self.monomial_inverse()? };
        let mut out = TorusElement::one(&self.theta);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base)?;
        }
        Ok(out)
    }

    /// Gauge automorphism for raw exponent parameters `s ∈ ℚ[t]ⁿ`:
    /// `U(λ) ↦ e(Σ s_k λ_k) U(λ)`.
    ///
    /// Raw polynomials matter: rational multiples of gauge parameters do
    /// not commute with mod-1 reduction, so canonicalization happens only
    /// here, at phase formation.
    pub fn gauge_raw(&self, s: &[RatPoly]) -> TorusElement {
        assert_eq!(s.len(), self.dim(), "gauge parameter length must match dimension");
        let mut terms = BTreeMap::new();
        for (lam, c) in &self.terms {
            let mut p = RatPoly::zero();
            for (k, sk) in s.iter().enumerate() {
                p = &p + &sk.scale_int(lam[k]);
            }
            let coeff = c * &Scalar::phase(PhaseExponent::new(p));
            Self::insert_add(&mut terms, lam.clone(), &coeff);
        }
        TorusElement { theta: self.theta.clone(), terms }
    }

    /// Gauge automorphism for canonical phase parameters.
    pub fn gauge(&self, s: &[PhaseExponent]) -> TorusElement {
        let raw: Vec<RatPoly> = s.iter().map(|p| p.as_poly().clone()).collect();
        self.gauge_raw(&raw)
    }

    /// Conjugation by the unitary monomial `U(μ)`, computed directly.
    pub fn inner_ad(&self, mu: &[i64]) -> Result<TorusElement> {
        let um = TorusElement::monomial(&self.theta, mu.to_vec(), Scalar::one());
        um.mul(self)?.mul(&um.monomial_inverse()?)
    }

    /// Conjugation by `U(μ)` as a gauge automorphism: parameters
    /// `s_l = Σ_k μ_k θ_{kl}`.
    pub fn inner_ad_gauge(&self, mu: &[i64]) -> TorusElement {
        assert_eq!(mu.len(), self.dim());
        let s = inner_gauge_params(&self.theta, mu);
        self.gauge_raw(&s)
    }

    /// Extend `u_k ↦ images[k]` multiplicatively: each term `c U(λ)` maps to
    /// `c · Π_k images[k]^{λ_k}`. Images must be invertible monomials in the
    /// target algebra; relation preservation is the caller's contract.
    pub fn map_generators(&self, images: &[TorusElement]) -> Result<TorusElement> {
        if images.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: images.len() });
        }
        let target = images
            .first()
            .map(|e| e.theta.clone())
            .ok_or_else(|| Error::Invalid("zero-dimensional generator map".into()))?;
        for img in images {
            if img.theta != target {
                return Err(Error::ThetaMismatch);
            }
            if img.single_term().is_none() {
                return Err(Error::Invalid("generator images must be single monomials".into()));
            }
        }
        let mut out = TorusElement::zero(&target);
        for (lam, c) in &self.terms {
            let mut word = TorusElement::one(&target);
            for (k, &e) in lam.iter().enumerate() {
                word = word.mul(&images[k].monomial_pow(e)?)?;
            }
            out = out.add(&word.scale(c))?;
        }
        Ok(out)
    }

    /// The lattice automorphism `L_M` for `M ∈ SL₂(ℤ)` on a 2-torus:
    /// `u ↦ U(M_{11}, M_{12})`, `v ↦ U(M_{21}, M_{22})`, so that
    /// `U(λ) ↦ (phase)·U(Mᵀλ)`.
    pub fn lattice_transform(&self, m: &IntMatrix) -> Result<TorusElement> {
        if self.dim() != 2 || !m.is_square() || m.rows() != 2 {
            return Err(Error::Invalid("lattice transforms are for 2-tori with 2x2 matrices".into()));
        }
        if m.det() != 1 {
            return Err(Error::NotUnimodular { det: m.det() });
        }
        let images: Vec<TorusElement> = (0..2)
            .map(|k| TorusElement::monomial(&self.theta, m.row(k), Scalar::one()))
            .collect();
        self.map_generators(&images)
    }

    /// Keep only the terms whose exponent satisfies the predicate.
    pub fn project_support<F: Fn(&[i64]) -> bool>(&self, keep: F) -> TorusElement {
        TorusElement {
            theta: self.theta.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(lam, _)| keep(lam))
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Gauge parameters of the inner automorphism `Ad[U(μ)]`: `s_l = Σ_k μ_k θ_{kl}`.
pub fn inner_gauge_params(theta: &ThetaMatrix, mu: &[i64]) -> Vec<RatPoly> {
    (0..theta.dim())
        .map(|l| {
            let mut p = RatPoly::zero();
            for (k, &mk) in mu.iter().enumerate() {
                p = &p + &theta.entry(k, l).scale_int(mk);
            }
            p
        })
        .collect()
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (lam, c) in &self.terms {
            let is_const = lam.iter().all(|&x| x == 0);
            if is_const {
                let piece = c.to_string();
                if first {
                    write!(f, "{piece}")?;
                } else if let Some(rest) = piece.strip_prefix('-') {
                    write!(f, " - {rest}")?;
                } else {
                    write!(f, " + {piece}")?;
                }
                first = false;
                continue;
            }
            let ustr = format!(
                "U({})",
                lam.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            );
            let canon = c.canonical_terms();
            match canon.len() {
                1 => {
                    let (p, r) = canon.iter().next().expect("len 1");
                    let neg = r.is_negative();
                    let abs = r.abs();
                    let mut parts: Vec<String> = Vec::new();
                    if !abs.is_one() {
                        parts.push(fmt_rational(&abs));
                    }
                    if !p.is_trivial() {
                        parts.push(format!("e({p})"));
                    }
                    parts.push(ustr);
                    let body = parts.join("*");
                    if first {
                        write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
                    } else {
                        write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
                    }
                }
                _ => {
                    let body = format!("({c})*{ustr}");
                    if first {
                        write!(f, "{body}")?;
                    } else {
                        write!(f, " + {body}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}
