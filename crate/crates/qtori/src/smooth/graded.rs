//! The graded covering algebra of a smooth noncommutative covering.
//!
//! Given a homomorphism from the dual group into the smooth outer
//! automorphisms of the base torus algebra, the covering algebra is the
//! twisted crossed product: a direct sum of copies of the base algebra
//! indexed by group elements, with multiplication twisted by the lifted
//! automorphisms and the structure constants of `compute_cocycle`.

use std::collections::BTreeMap;

use num::rational::Ratio;
use num::BigRational;

use crate::abgroup::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::phase::Scalar;
use crate::ratpoly::RatPoly;
use crate::smooth::cocycle::{compute_cocycle, solve_associativity, SigmaEntry, SigmaTable};
use crate::smooth::out::{
    check_homomorphism, hom_image, GaugeVec, OutSmoothElement, TorusPoint,
};
use crate::torus::{ThetaMatrix, TorusElement};

/// Automorphism assigned to one dual-group element: the lattice transform by
/// `m` followed by the gauge twist with parameter vector `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    pub x: GaugeVec,
    pub m: IntMatrix,
}

/// Apply the lifted automorphism: lattice transform first, then gauge twist.
pub fn alpha_apply(lift: &Lift, x: &TorusElement) -> Result<TorusElement> {
    Ok(lift.x.gauge_apply(&x.lattice_transform(&lift.m)?))
}

/// Element of the covering algebra: finitely many components, one torus
/// algebra coefficient per dual-group element.  Zero coefficients are never
/// stored, so structural equality is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedElement {
    components: BTreeMap<Vec<i64>, TorusElement>,
}

impl GradedElement {
    pub fn zero() -> Self {
        GradedElement { components: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.components.keys()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<i64>, &TorusElement)> {
        self.components.iter()
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Coefficient at a group element; zero when absent.
    pub fn component(&self, chi: &[i64], theta: &ThetaMatrix) -> TorusElement {
        self.components.get(chi).cloned().unwrap_or_else(|| TorusElement::zero(theta))
    }

    fn insert(&mut self, chi: Vec<i64>, value: TorusElement) {
        if !value.is_zero() {
            self.components.insert(chi, value);
        }
    }

    fn accumulate(&mut self, chi: Vec<i64>, value: TorusElement) -> Result<()> {
        match self.components.remove(&chi) {
            None => self.insert(chi, value),
            Some(old) => self.insert(chi, old.add(&value)?),
        }
        Ok(())
    }
}

/// Report of the structural checks on a covering algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedReport {
    /// Structure constants at unit pairs are trivial.
    pub normalized: bool,
    /// Composing two lifts agrees with the lifted product up to Ad by the
    /// structure constant.
    pub alpha_consistent: bool,
    /// The product is associative on every triple of graded components.
    pub associative: bool,
    /// Every canonical generator is unitary on both sides.
    pub unitaries: bool,
    /// Products and adjoints respect the grading.
    pub graded: bool,
    /// Averaging the dual action projects exactly onto the unit component.
    pub fixed_algebra: bool,
    /// The involution squares to the identity and reverses products.
    pub involution: bool,
    /// The dual action is multiplicative on samples.
    pub action_covariant: bool,
}

impl GradedReport {
    pub fn all_passed(&self) -> bool {
        self.normalized
            && self.alpha_consistent
            && self.associative
            && self.unitaries
            && self.graded
            && self.fixed_algebra
            && self.involution
            && self.action_covariant
    }
}

/// A smooth covering algebra presented as a twisted crossed product.
#[derive(Debug, Clone)]
pub struct GradedSystem {
    theta: ThetaMatrix,
    group: FiniteAbelianGroup,
    lifts: Vec<Lift>,
    sigma: SigmaTable,
}

impl GradedSystem {
    pub(crate) fn from_parts(
        theta: ThetaMatrix,
        group: FiniteAbelianGroup,
        lifts: Vec<Lift>,
        sigma: SigmaTable,
    ) -> Self {
        debug_assert_eq!(lifts.len() as i64, group.order());
        GradedSystem { theta, group, lifts, sigma }
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn lift(&self, chi: &[i64]) -> &Lift {
        &self.lifts[self.group.element_index(&self.group.reduce(chi))]
    }

    pub fn sigma(&self) -> &SigmaTable {
        &self.sigma
    }

    pub fn sigma_entry(&self, c1: &[i64], c2: &[i64]) -> &SigmaEntry {
        let key = (self.group.reduce(c1), self.group.reduce(c2));
        self.sigma.get(&key).expect("sigma table is total over group pairs")
    }

    pub fn sigma_monomial(&self, c1: &[i64], c2: &[i64]) -> TorusElement {
        self.sigma_entry(c1, c2).monomial(&self.theta)
    }

    /// The outer-automorphism image of a dual-group element, reconstructed
    /// from its stored lift.
    pub fn phi(&self, chi: &[i64]) -> Result<OutSmoothElement> {
        let lift = self.lift(chi);
        OutSmoothElement::from_gauge(&lift.x, lift.m.clone())
    }

    /// Apply the lifted automorphism of `chi` to a base-algebra element.
    pub fn alpha(&self, chi: &[i64], x: &TorusElement) -> Result<TorusElement> {
        alpha_apply(self.lift(chi), x)
    }

    pub fn zero(&self) -> GradedElement {
        GradedElement::zero()
    }

    pub fn one(&self) -> GradedElement {
        self.unitary(&self.group.zero())
    }

    /// `a e_1`: the base algebra sitting in the unit component.
    pub fn embed(&self, a: &TorusElement) -> Result<GradedElement> {
        if a.theta() != &self.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(self.component(&self.group.zero(), a.clone()))
    }

    /// `a e_chi`: a single graded component.
    pub fn component(&self, chi: &[i64], a: TorusElement) -> GradedElement {
        let mut out = GradedElement::zero();
        out.insert(self.group.reduce(chi), a);
        out
    }

    /// The canonical unitary `e_chi`.
    pub fn unitary(&self, chi: &[i64]) -> GradedElement {
        self.component(chi, TorusElement::one(&self.theta))
    }

    pub fn add(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        let mut out = x.clone();
        for (chi, a) in &y.components {
            out.accumulate(chi.clone(), a.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        self.add(x, &self.scale(y, &Scalar::from_int(-1)))
    }

    pub fn scale(&self, x: &GradedElement, s: &Scalar) -> GradedElement {
        let mut out = GradedElement::zero();
        for (chi, a) in &x.components {
            out.insert(chi.clone(), a.scale(s));
        }
        out
    }

    /// Twisted product: `(a e_c1)(b e_c2) = a alpha_{c1}(b) sigma(c1,c2) e_{c1 c2}`.
    pub fn mul(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::zero();
        for (c1, a) in &x.components {
            for (c2, b) in &y.components {
                let c3 = self.group.add(c1, c2);
                let coeff = a.mul(&self.alpha(c1, b)?)?.mul(&self.sigma_monomial(c1, c2))?;
                out.accumulate(c3, coeff)?;
            }
        }
        Ok(out)
    }

    /// Involution: `(a e_chi)^* = sigma(-chi, chi)^* alpha_{-chi}(a^*) e_{-chi}`.
    pub fn adjoint(&self, x: &GradedElement) -> Result<GradedElement> {
        let mut out = GradedElement::zero();
        for (chi, a) in &x.components {
            let inv = self.group.neg(chi);
            let coeff = self
                .sigma_monomial(&inv, chi)
                .adjoint()
                .mul(&self.alpha(&inv, &a.adjoint())?)?;
            out.accumulate(inv, coeff)?;
        }
        Ok(out)
    }

    /// The dual action: `alpha_g(a e_chi) = e(<chi, g>) a e_chi`.
    pub fn action(&self, g: &[i64], x: &GradedElement) -> GradedElement {
        let mut out = GradedElement::zero();
        for (chi, a) in &x.components {
            let phase = Scalar::phase(self.group.pairing(chi, g));
            out.insert(chi.clone(), a.scale(&phase));
        }
        out
    }

    /// Restriction to the unit component, embedded back as a graded element.
    pub fn unit_part(&self, x: &GradedElement) -> GradedElement {
        let zero = self.group.zero();
        match x.components.get(&zero) {
            None => GradedElement::zero(),
            Some(a) => self.component(&zero, a.clone()),
        }
    }

    /// Average of the dual action over the whole group.
    pub fn action_average(&self, x: &GradedElement) -> Result<GradedElement> {
        let mut sum = GradedElement::zero();
        for g in self.group.elements() {
            sum = self.add(&sum, &self.action(&g, x))?;
        }
        let weight = Scalar::from_rational(Ratio::new(1.into(), self.group.order().into()));
        Ok(self.scale(&sum, &weight))
    }

    /// The class of `Ad[e_chi]` restricted to the base algebra, as a smooth
    /// outer automorphism.
    pub fn picard_of(&self, chi: &[i64]) -> Result<OutSmoothElement> {
        let e = self.unitary(chi);
        let e_star = self.adjoint(&e)?;
        let theta12 = self.theta.entry(0, 1);

        let mut rows = Vec::with_capacity(2);
        let mut phases = Vec::with_capacity(2);
        for k in 0..2 {
            let a = self.embed(&TorusElement::generator(&self.theta, k)?)?;
            let conj = self.mul(&self.mul(&e, &a)?, &e_star)?;
            if conj.component_count() != 1 {
                return Err(Error::Invalid(
                    "conjugation by a canonical unitary left the base algebra".into(),
                ));
            }
            let base = conj.component(&self.group.zero(), &self.theta);
            let (exp, coeff) = base
                .single_term()
                .ok_or_else(|| Error::Invalid("conjugated generator is not a monomial".into()))?;
            let (phase, _) = coeff
                .single_term()
                .filter(|(_, m)| *m == &BigRational::from_integer(1.into()))
                .ok_or_else(|| {
                    Error::Invalid("conjugated generator is not a unitary monomial".into())
                })?;
            rows.push(exp.clone());
            phases.push(phase.as_poly().clone());
        }

        let n_mat = IntMatrix::from_rows(rows);
        let n_inv = n_mat.inverse_unimodular()?;
        let mut w = Vec::with_capacity(2);
        for i in 0..2 {
            let mut s = RatPoly::zero();
            for (k, r) in phases.iter().enumerate() {
                s = &s + &r.scale_int(n_inv[(i, k)]);
            }
            let (a, b) = s.decompose_affine(theta12).ok_or_else(|| {
                Error::Invalid("conjugation gauge is not an affine function of theta".into())
            })?;
            w.push(TorusPoint::new(a, b));
        }
        OutSmoothElement::new(w, n_mat)
    }

    /// Exhaustive structural verification of the covering algebra.
    pub fn verify(&self) -> Result<GradedReport> {
        let elements = self.group.elements();
        let zero = self.group.zero();
        let one = TorusElement::one(&self.theta);
        let u = TorusElement::generator(&self.theta, 0)?;
        let v = TorusElement::generator(&self.theta, 1)?;
        let uv = u.mul(&v)?;

        let mut normalized = true;
        for chi in &elements {
            normalized &= self.sigma_entry(&zero, chi).is_trivial();
            normalized &= self.sigma_entry(chi, &zero).is_trivial();
        }

        let mut alpha_consistent = true;
        for c1 in &elements {
            for c2 in &elements {
                let c3 = self.group.add(c1, c2);
                let s = self.sigma_monomial(c1, c2);
                let s_inv = s.monomial_inverse()?;
                for gen in [&u, &v] {
                    let two_step = self.alpha(c1, &self.alpha(c2, gen)?)?;
                    let conjugated = s.mul(&self.alpha(&c3, gen)?)?.mul(&s_inv)?;
                    alpha_consistent &= two_step == conjugated;
                }
            }
        }

        // Bare unitary triples, then coefficient-decorated samples.
        let mut associative = true;
        for c1 in &elements {
            for c2 in &elements {
                for c3 in &elements {
                    let (x, y, z) = (self.unitary(c1), self.unitary(c2), self.unitary(c3));
                    let left = self.mul(&self.mul(&x, &y)?, &z)?;
                    let right = self.mul(&x, &self.mul(&y, &z)?)?;
                    associative &= left == right;
                }
            }
        }
        let mut decorated = Vec::new();
        for (i, coeff) in [&u, &v, &uv].into_iter().enumerate() {
            let mut x = GradedElement::zero();
            for (j, chi) in elements.iter().enumerate() {
                if (i + j) % 2 == 0 {
                    x.insert(chi.clone(), coeff.clone());
                } else {
                    x.insert(chi.clone(), coeff.adjoint());
                }
            }
            decorated.push(x);
        }
        for x in &decorated {
            for y in &decorated {
                for z in &decorated {
                    let left = self.mul(&self.mul(x, y)?, z)?;
                    let right = self.mul(x, &self.mul(y, z)?)?;
                    associative &= left == right;
                }
            }
        }

        let identity = self.one();
        let mut unitaries = true;
        for chi in &elements {
            let e = self.unitary(chi);
            let e_star = self.adjoint(&e)?;
            unitaries &= self.mul(&e_star, &e)? == identity;
            unitaries &= self.mul(&e, &e_star)? == identity;
        }

        let mut graded = true;
        for c1 in &elements {
            for c2 in &elements {
                let product = self.mul(&self.unitary(c1), &self.unitary(c2))?;
                let expected = self.group.add(c1, c2);
                graded &= product.support().all(|s| s == &expected);
            }
            let adj = self.adjoint(&self.unitary(c1))?;
            let expected = self.group.neg(c1);
            graded &= adj.support().all(|s| s == &expected);
        }

        let mut fixed_algebra = true;
        for x in &decorated {
            fixed_algebra &= self.action_average(x)? == self.unit_part(x);
        }
        // A full-support element with unit coefficients averages to e_1.
        let mut full = GradedElement::zero();
        for chi in &elements {
            full.insert(chi.clone(), one.clone());
        }
        fixed_algebra &= self.action_average(&full)? == identity;

        let mut involution = true;
        for x in &decorated {
            involution &= self.adjoint(&self.adjoint(x)?)? == *x;
        }
        for x in &decorated {
            for y in &decorated {
                let lhs = self.adjoint(&self.mul(x, y)?)?;
                let rhs = self.mul(&self.adjoint(y)?, &self.adjoint(x)?)?;
                involution &= lhs == rhs;
            }
        }

        let mut action_covariant = true;
        for g in self.group.elements() {
            for x in &decorated {
                for y in &decorated {
                    let lhs = self.action(&g, &self.mul(x, y)?);
                    let rhs = self.mul(&self.action(&g, x), &self.action(&g, y))?;
                    action_covariant &= lhs == rhs;
                }
            }
        }

        Ok(GradedReport {
            normalized,
            alpha_consistent,
            associative,
            unitaries,
            graded,
            fixed_algebra,
            involution,
            action_covariant,
        })
    }
}

/// Build the covering algebra of a homomorphism into the smooth outer
/// automorphism group, given by its images on the dual-group generators.
///
/// The injective case lifts every group element to the canonical gauge
/// representative of its image and repairs the structure constants with
/// `solve_associativity`.  A non-injective homomorphism factors through the
/// quotient by its kernel; the covering of the quotient is built first and
/// its lifts and structure constants are pulled back along the projection.
pub fn build_smooth_covering(
    theta: &ThetaMatrix,
    group: &FiniteAbelianGroup,
    images: &[OutSmoothElement],
) -> Result<GradedSystem> {
    if theta.dim() != 2 {
        return Err(Error::Invalid(format!(
            "smooth coverings require a 2-dimensional torus, got dimension {}",
            theta.dim()
        )));
    }
    if !theta.is_quite_irrational() {
        return Err(Error::Invalid(
            "smooth coverings require a quite irrational theta matrix".into(),
        ));
    }
    if images.len() != group.rank() {
        return Err(Error::DimensionMismatch { expected: group.rank(), got: images.len() });
    }
    let report = check_homomorphism(group, images);
    if !report.homomorphism {
        return Err(Error::NotHomomorphism(
            "generator images do not satisfy the group relations".into(),
        ));
    }

    if report.injective {
        let lifts: Vec<Lift> = group
            .elements()
            .iter()
            .map(|chi| {
                let out = hom_image(images, chi);
                Lift { x: out.gauge_lift(), m: out.matrix().clone() }
            })
            .collect();
        let raw = compute_cocycle(theta, group, &lifts)?;
        let sigma = solve_associativity(theta, group, &lifts, &raw)?;
        return Ok(GradedSystem::from_parts(theta.clone(), group.clone(), lifts, sigma));
    }

    // Factor through the quotient by the kernel and pull back.
    let kernel: Vec<Vec<i64>> = group
        .elements()
        .into_iter()
        .filter(|chi| hom_image(images, chi).is_identity())
        .collect();
    let qmap = group.quotient_by(&kernel)?;
    let quotient = qmap.target().clone();
    let q_images: Vec<OutSmoothElement> = quotient
        .generators()
        .iter()
        .map(|gen| hom_image(images, &qmap.section(gen)))
        .collect();
    let q_system = build_smooth_covering(theta, &quotient, &q_images)?;

    let lifts: Vec<Lift> = group
        .elements()
        .iter()
        .map(|chi| q_system.lift(&qmap.project(chi)).clone())
        .collect();
    let mut sigma = SigmaTable::new();
    for c1 in group.elements() {
        for c2 in group.elements() {
            let entry = q_system.sigma_entry(&qmap.project(&c1), &qmap.project(&c2)).clone();
            sigma.insert((c1.clone(), c2), entry);
        }
    }
    Ok(GradedSystem::from_parts(theta.clone(), group.clone(), lifts, sigma))
}
