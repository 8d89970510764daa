//! The smooth outer automorphism group of the quantum 2-torus:
//! (𝕋/⟨e(θ)⟩)² ⋊ SL₂(ℤ), in exact arithmetic. Each circle factor is
//! restricted to the points a + bθ with a, b rational, which carry every
//! finite-order element of the quotient.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::ratpoly::{fmt_rational, rat_mod1, RatPoly};
use crate::torus::TorusElement;

/// A point of 𝕋/⟨e(θ)⟩ = ℝ/(ℤ+θℤ): the class of a + bθ with canonical
/// representatives a, b ∈ [0,1). Since θ is irrational (it carries a
/// transcendental part), a + bθ ≡ 0 forces a = b = 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorusPoint {
    a: BigRational,
    b: BigRational,
}

impl TorusPoint {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        TorusPoint { a: rat_mod1(&a), b: rat_mod1(&b) }
    }

    pub fn zero() -> Self {
        TorusPoint { a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Rational part of the canonical representative.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of θ in the canonical representative.
    pub fn theta_part(&self) -> &BigRational {
        &self.b
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => write!(f, "{}*theta", fmt_rational(&self.b)),
            (false, false) => write!(f, "{} + {}*theta", fmt_rational(&self.a), fmt_rational(&self.b)),
        }
    }
}

/// An exact gauge vector: per coordinate the value a + bθ, kept as the
/// rational pair (a, b) without quotient reduction. These are the
/// pre-images ("lifts") of [`TorusPoint`] pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GaugeVec {
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
}

impl GaugeVec {
    pub fn zero(n: usize) -> Self {
        GaugeVec { a: vec![BigRational::zero(); n], b: vec![BigRational::zero(); n] }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn add(&self, rhs: &GaugeVec) -> GaugeVec {
        GaugeVec {
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x + y).collect(),
            b: self.b.iter().zip(&rhs.b).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, rhs: &GaugeVec) -> GaugeVec {
        GaugeVec {
            a: self.a.iter().zip(&rhs.a).map(|(x, y)| x - y).collect(),
            b: self.b.iter().zip(&rhs.b).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self) -> GaugeVec {
        GaugeVec { a: self.a.iter().map(|x| -x).collect(), b: self.b.iter().map(|x| -x).collect() }
    }

    /// Apply an integer matrix; it acts on the rational layer and the
    /// θ-layer separately since θ is a scalar.
    pub fn matrix_apply(&self, m: &IntMatrix) -> GaugeVec {
        let app = |v: &[BigRational]| -> Vec<BigRational> {
            (0..m.rows())
                .map(|i| {
                    let mut acc = BigRational::zero();
                    for (j, x) in v.iter().enumerate() {
                        acc += BigRational::from_integer(BigInt::from(m[(i, j)])) * x;
                    }
                    acc
                })
                .collect()
        };
        GaugeVec { a: app(&self.a), b: app(&self.b) }
    }

    /// The gauge parameters s_k = a_k + b_k·θ as exact polynomials.
    pub fn to_polys(&self, theta12: &RatPoly) -> Vec<RatPoly> {
        self.a
            .iter()
            .zip(&self.b)
            .map(|(a, b)| &RatPoly::constant(a.clone()) + &theta12.scale(b))
            .collect()
    }

    pub fn reduce(&self) -> Vec<TorusPoint> {
        self.a.iter().zip(&self.b).map(|(a, b)| TorusPoint::new(a.clone(), b.clone())).collect()
    }

    pub fn from_points(points: &[TorusPoint]) -> GaugeVec {
        GaugeVec {
            a: points.iter().map(|p| p.a.clone()).collect(),
            b: points.iter().map(|p| p.b.clone()).collect(),
        }
    }

    /// Apply the gauge automorphism γ_s to a torus element.
    pub fn gauge_apply(&self, x: &TorusElement) -> TorusElement {
        x.gauge_raw(&self.to_polys(x.theta().entry(0, 1)))
    }
}

/// An element of Out^∞ = (𝕋/⟨e(θ)⟩)² ⋊ SL₂(ℤ): a reduced gauge class w and
/// a determinant-one integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutSmoothElement {
    w: Vec<TorusPoint>,
    m: IntMatrix,
}

impl OutSmoothElement {
    pub fn new(w: Vec<TorusPoint>, m: IntMatrix) -> Result<Self> {
        if w.len() != 2 || !m.is_square() || m.rows() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: w.len().max(m.rows()) });
        }
        let det = m.det();
        if det != 1 {
            return Err(Error::NotUnimodular { det });
        }
        Ok(OutSmoothElement { w, m })
    }

    /// Build from unreduced gauge data; the w part is canonicalized.
    pub fn from_gauge(x: &GaugeVec, m: IntMatrix) -> Result<Self> {
        OutSmoothElement::new(x.reduce(), m)
    }

    pub fn identity() -> Self {
        OutSmoothElement { w: vec![TorusPoint::zero(), TorusPoint::zero()], m: IntMatrix::identity(2) }
    }

    pub fn is_identity(&self) -> bool {
        self.w.iter().all(TorusPoint::is_zero) && self.m == IntMatrix::identity(2)
    }

    pub fn w(&self) -> &[TorusPoint] {
        &self.w
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    /// Canonical lift of the gauge class: the [0,1) representatives.
    pub fn gauge_lift(&self) -> GaugeVec {
        GaugeVec::from_points(&self.w)
    }
}

impl std::fmt::Display for OutSmoothElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({}, {}), {:?})", self.w[0], self.w[1], self.m)
    }
}

/// Group law of Out^∞. The semidirect twist is the derived action
/// ρ(M) = M⁻¹ pinned by the conjugation identity
/// L_M ∘ γ_s ∘ L_M⁻¹ = γ_{M⁻¹s}; with that twist the matrix legs compose
/// in reverse order, matching composition of the underlying automorphisms
/// (x·y acts as x after y on gauge data, i.e. α_x ∘ α_y).
pub fn out_mul(x: &OutSmoothElement, y: &OutSmoothElement) -> OutSmoothElement {
    let m1_inv = x.m.adjugate(); // det 1
    let w = GaugeVec::from_points(&x.w).add(&GaugeVec::from_points(&y.w).matrix_apply(&m1_inv));
    OutSmoothElement { w: w.reduce(), m: y.m.mul(&x.m) }
}

pub fn out_inv(x: &OutSmoothElement) -> OutSmoothElement {
    let m_inv = x.m.adjugate();
    let w = GaugeVec::from_points(&x.w).matrix_apply(&x.m).neg();
    OutSmoothElement { w: w.reduce(), m: m_inv }
}

pub fn out_pow(x: &OutSmoothElement, k: i64) -> OutSmoothElement {
    let mut acc = OutSmoothElement::identity();
    let (base, reps) = if k < 0 { (out_inv(x), -k) } else { (x.clone(), k) };
    for _ in 0..reps {
        acc = out_mul(&acc, &base);
    }
    acc
}

/// Verdict of [`check_homomorphism`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub homomorphism: bool,
    pub injective: bool,
}

/// Evaluate φ(χ) = Π images[i]^{χ_i} for generator images.
pub fn hom_image(images: &[OutSmoothElement], chi: &[i64]) -> OutSmoothElement {
    let mut acc = OutSmoothElement::identity();
    for (img, &c) in images.iter().zip(chi) {
        acc = out_mul(&acc, &out_pow(img, c));
    }
    acc
}

/// Check whether generator images define a homomorphism Ĝ → Out^∞: images
/// must pairwise commute and have the generator orders; injectivity of the
/// induced map is reported alongside.
pub fn check_homomorphism(
    group: &crate::abgroup::FiniteAbelianGroup,
    images: &[OutSmoothElement],
) -> HomReport {
    if images.len() != group.rank() {
        return HomReport { homomorphism: false, injective: false };
    }
    let mut homomorphism = true;
    for (img, &d) in images.iter().zip(group.factors()) {
        if !out_pow(img, d).is_identity() {
            homomorphism = false;
        }
    }
    for i in 0..images.len() {
        for j in (i + 1)..images.len() {
            if out_mul(&images[i], &images[j]) != out_mul(&images[j], &images[i]) {
                homomorphism = false;
            }
        }
    }
    if !homomorphism {
        return HomReport { homomorphism, injective: false };
    }
    let mut injective = true;
    for chi in group.elements() {
        if !group.is_zero(&chi) && hom_image(images, &chi).is_identity() {
            injective = false;
        }
    }
    HomReport { homomorphism, injective }
}

/// The inverse of the lattice transformation as an algebra automorphism:
/// L_M⁻¹ composed with the gauge correction −d, where d is the composition
/// defect of L_M ∘ L_{M⁻¹} read off on the generators.
pub fn lattice_inverse_apply(m: &IntMatrix, x: &TorusElement) -> Result<TorusElement> {
    let m_inv = m.inverse_unimodular()?;
    let d = lattice_composition_defect(m, &m_inv, x.theta())?;
    let neg_d: Vec<RatPoly> = d.iter().map(|p| -p).collect();
    x.gauge_raw(&neg_d).lattice_transform(&m_inv)
}

/// Gauge defect d with L_{M₁} ∘ L_{M₂} = γ_d ∘ L_{M₂M₁}: component k is the
/// phase of L_{M₁}(L_{M₂}(u_k)) transported back along (M₂M₁)ᵀ.
pub fn lattice_composition_defect(
    m1: &IntMatrix,
    m2: &IntMatrix,
    theta: &crate::torus::ThetaMatrix,
) -> Result<Vec<RatPoly>> {
    let n = theta.dim();
    let prod = m2.mul(m1);
    let prod_inv = prod.inverse_unimodular()?;
    let mut delta = Vec::with_capacity(n);
    for k in 0..n {
        let gen = crate::torus::TorusElement::generator(theta, k)?;
        let image = gen.lattice_transform(m2)?.lattice_transform(m1)?;
        let (exp, coeff) = image.single_term().ok_or_else(|| Error::Invalid("lattice image not a monomial".into()))?;
        debug_assert_eq!(exp, &prod.row(k));
        let (phase, unit) = coeff.single_term().ok_or_else(|| Error::Invalid("lattice image coefficient not a phase".into()))?;
        if !unit.is_one() {
            return Err(Error::Invalid("lattice image coefficient not a unit phase".into()));
        }
        delta.push(phase.as_poly().clone());
    }
    // d solves ⟨d, (M₂M₁)ᵀe_k⟩ = δ_k, i.e. d = (M₂M₁)⁻¹δ.
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = RatPoly::zero();
        for (k, dk) in delta.iter().enumerate() {
            let c = prod_inv[(i, k)];
            if c != 0 {
                acc = &acc + &dk.scale_int(c);
            }
        }
        d.push(acc);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::big_rat;
    use crate::phase::Scalar;
    use crate::torus::ThetaMatrix;

    fn pt(p: i64, q: i64, r: i64, s: i64) -> Vec<TorusPoint> {
        vec![TorusPoint::new(big_rat(p, q), big_rat(0, 1)), TorusPoint::new(big_rat(r, s), big_rat(0, 1))]
    }

    fn s_mat() -> IntMatrix {
        IntMatrix::mat2(0, 1, -1, 0)
    }

    fn t_mat() -> IntMatrix {
        IntMatrix::mat2(1, 1, 0, 1)
    }

    #[test]
    fn torus_point_reduction() {
        let p = TorusPoint::new(big_rat(7, 2), big_rat(-1, 3));
        assert_eq!(p.rational_part(), &big_rat(1, 2));
        assert_eq!(p.theta_part(), &big_rat(2, 3));
        assert!(TorusPoint::new(big_rat(3, 1), big_rat(-2, 1)).is_zero());
    }

    #[test]
    fn translation_subgroup() {
        let x = OutSmoothElement::new(pt(1, 3, 0, 1), IntMatrix::identity(2)).unwrap();
        let y = OutSmoothElement::new(pt(1, 2, 1, 5), IntMatrix::identity(2)).unwrap();
        let xy = out_mul(&x, &y);
        assert_eq!(xy.w()[0], TorusPoint::new(big_rat(5, 6), big_rat(0, 1)));
        assert_eq!(xy.w()[1], TorusPoint::new(big_rat(1, 5), big_rat(0, 1)));
        assert_eq!(xy.matrix(), &IntMatrix::identity(2));
    }

    #[test]
    fn rotation_squares_to_minus_identity() {
        let s = OutSmoothElement::new(pt(0, 1, 0, 1), s_mat()).unwrap();
        let s2 = out_mul(&s, &s);
        assert!(s2.w().iter().all(TorusPoint::is_zero));
        assert_eq!(s2.matrix(), &IntMatrix::mat2(-1, 0, 0, -1));
        assert!(out_pow(&s, 4).is_identity());
    }

    #[test]
    fn group_axioms_on_samples() {
        let elems = vec![
            OutSmoothElement::new(pt(1, 2, 1, 3), s_mat()).unwrap(),
            OutSmoothElement::new(
                vec![TorusPoint::new(big_rat(0, 1), big_rat(1, 2)), TorusPoint::zero()],
                t_mat(),
            )
            .unwrap(),
            OutSmoothElement::new(pt(2, 5, 4, 7), t_mat().mul(&s_mat())).unwrap(),
        ];
        for x in &elems {
            assert!(out_mul(x, &out_inv(x)).is_identity());
            assert!(out_mul(&out_inv(x), x).is_identity());
            assert_eq!(out_mul(x, &OutSmoothElement::identity()), *x);
            assert_eq!(out_mul(&OutSmoothElement::identity(), x), *x);
            for y in &elems {
                for z in &elems {
                    let lhs = out_mul(&out_mul(x, y), z);
                    let rhs = out_mul(x, &out_mul(y, z));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn lattice_points_are_identity() {
        let x = OutSmoothElement::new(
            vec![TorusPoint::new(big_rat(3, 1), big_rat(-5, 1)), TorusPoint::new(big_rat(0, 1), big_rat(2, 1))],
            IntMatrix::identity(2),
        )
        .unwrap();
        assert!(x.is_identity());
    }

    #[test]
    fn determinant_must_be_one() {
        assert!(matches!(
            OutSmoothElement::new(pt(0, 1, 0, 1), IntMatrix::mat2(1, 0, 0, -1)),
            Err(Error::NotUnimodular { det: -1 })
        ));
    }

    #[test]
    fn conjugation_identity_pins_the_twist() {
        // L_M ∘ γ_s ∘ (L_M)⁻¹ = γ_{M⁻¹s} on all monomials |λ|∞ ≤ 3.
        let theta = ThetaMatrix::standard_2d();
        let s_vec = GaugeVec {
            a: vec![big_rat(1, 3), big_rat(1, 5)],
            b: vec![big_rat(1, 2), big_rat(0, 1)],
        };
        for m in [s_mat(), t_mat()] {
            let twisted = s_vec.matrix_apply(&m.adjugate());
            for l1 in -3..=3i64 {
                for l2 in -3..=3i64 {
                    let mono = TorusElement::monomial(&theta, vec![l1, l2], Scalar::one());
                    let inner = lattice_inverse_apply(&m, &mono).unwrap();
                    let lhs = s_vec.gauge_apply(&inner).lattice_transform(&m).unwrap();
                    let rhs = twisted.gauge_apply(&mono);
                    assert_eq!(lhs, rhs, "M = {m:?}, λ = ({l1},{l2})");
                }
            }
        }
    }

    #[test]
    fn lattice_inverse_is_two_sided() {
        let theta = ThetaMatrix::standard_2d();
        for m in [s_mat(), t_mat(), t_mat().mul(&s_mat())] {
            for l1 in -2..=2i64 {
                for l2 in -2..=2i64 {
                    let mono = TorusElement::monomial(&theta, vec![l1, l2], Scalar::one());
                    let round = lattice_inverse_apply(&m, &mono).unwrap().lattice_transform(&m).unwrap();
                    assert_eq!(round, mono);
                    let round = lattice_inverse_apply(&m, &mono.lattice_transform(&m).unwrap()).unwrap();
                    assert_eq!(round, mono);
                }
            }
        }
    }

    #[test]
    fn hom_check_examples() {
        let g = crate::abgroup::FiniteAbelianGroup::cyclic(2);
        // w = θ/2: doubling lands in ℤ+θℤ.
        let good = OutSmoothElement::new(
            vec![TorusPoint::new(big_rat(0, 1), big_rat(1, 2)), TorusPoint::zero()],
            IntMatrix::identity(2),
        )
        .unwrap();
        let report = check_homomorphism(&g, &[good]);
        assert!(report.homomorphism);
        assert!(report.injective);
        // w = 1/3 has order 3, not 2.
        let bad = OutSmoothElement::new(pt(1, 3, 0, 1), IntMatrix::identity(2)).unwrap();
        assert!(!check_homomorphism(&g, &[bad]).homomorphism);
        // Trivial group: no generators to check.
        let trivial = crate::abgroup::FiniteAbelianGroup::trivial();
        let report = check_homomorphism(&trivial, &[]);
        assert!(report.homomorphism);
        assert!(report.injective);
        // Identity image is a homomorphism but not injective.
        let report = check_homomorphism(&g, &[OutSmoothElement::identity()]);
        assert!(report.homomorphism);
        assert!(!report.injective);
    }

    #[test]
    fn c3_matrix_order() {
        let g = crate::abgroup::FiniteAbelianGroup::cyclic(3);
        let m = IntMatrix::mat2(0, 1, -1, -1);
        let img = OutSmoothElement::new(pt(1, 7, 2, 7), m).unwrap();
        // Any translation part works: I + M + M² = 0.
        let report = check_homomorphism(&g, &[img]);
        assert!(report.homomorphism);
        assert!(report.injective);
    }
}
