//! Inflating a covering along a group extension.
//!
//! Given a covering algebra for the group N and a symmetric 2-cocycle
//! describing an abelian extension E of N by H, the inflated covering is the
//! algebra of functions on H with values in the base covering, carrying the
//! E-action that twists translation on H by the cocycle.  Its isotypic
//! components factor as a character of H tensored with the matching isotypic
//! component of the base covering, so inflation changes no spectral data
//! except the acting group.

use std::collections::BTreeMap;

use num::rational::Ratio;

use crate::abgroup::{ExtCharacter, ExtElem, ExtensionGroup, FiniteAbelianGroup};
use crate::error::Result;
use crate::phase::Scalar;
use crate::smooth::graded::{GradedElement, GradedSystem};
use crate::smooth::out::OutSmoothElement;

/// Function from H to the base covering algebra.  Zero values are never
/// stored, so structural equality is canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct InflatedElement {
    values: BTreeMap<Vec<i64>, GradedElement>,
}

impl InflatedElement {
    pub fn zero() -> Self {
        InflatedElement { values: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// The value at a point of H; zero when absent.
    pub fn value(&self, h: &[i64]) -> GradedElement {
        self.values.get(h).cloned().unwrap_or_else(GradedElement::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Vec<i64>> {
        self.values.keys()
    }

    fn insert(&mut self, h: Vec<i64>, value: GradedElement) {
        if !value.is_zero() {
            self.values.insert(h, value);
        }
    }
}

/// A covering algebra inflated along an extension of its acting group.
#[derive(Debug, Clone)]
pub struct InflatedSystem {
    base: GradedSystem,
    ext: ExtensionGroup,
}

/// Inflate a covering along the extension of its dual group described by the
/// symmetric normalized 2-cocycle `omega` on `h_group`.
pub fn inflate_by_extension<F>(
    base: GradedSystem,
    h_group: FiniteAbelianGroup,
    omega: F,
) -> Result<InflatedSystem>
where
    F: Fn(&[i64], &[i64]) -> Vec<i64>,
{
    let ext = ExtensionGroup::new(base.group().clone(), h_group, omega)?;
    Ok(InflatedSystem { base, ext })
}

impl InflatedSystem {
    pub fn base(&self) -> &GradedSystem {
        &self.base
    }

    pub fn ext(&self) -> &ExtensionGroup {
        &self.ext
    }

    /// Build a function by evaluating a closure at every point of H.
    pub fn function<F>(&self, mut f: F) -> Result<InflatedElement>
    where
        F: FnMut(&[i64]) -> Result<GradedElement>,
    {
        let mut out = InflatedElement::zero();
        for h in self.ext.h_group().elements() {
            out.insert(h.clone(), f(&h)?);
        }
        Ok(out)
    }

    /// The constant function with value `e_1`, the unit of the inflated
    /// algebra.
    pub fn one(&self) -> InflatedElement {
        let mut out = InflatedElement::zero();
        for h in self.ext.h_group().elements() {
            out.insert(h, self.base.one());
        }
        out
    }

    pub fn add(&self, f: &InflatedElement, g: &InflatedElement) -> Result<InflatedElement> {
        let mut out = f.clone();
        for (h, v) in &g.values {
            let merged = self.base.add(&out.value(h), v)?;
            out.values.remove(h);
            out.insert(h.clone(), merged);
        }
        Ok(out)
    }

    pub fn scale(&self, f: &InflatedElement, s: &Scalar) -> InflatedElement {
        let mut out = InflatedElement::zero();
        for (h, v) in &f.values {
            out.insert(h.clone(), self.base.scale(v, s));
        }
        out
    }

    /// Pointwise product of functions.
    pub fn mul(&self, f: &InflatedElement, g: &InflatedElement) -> Result<InflatedElement> {
        let mut out = InflatedElement::zero();
        for (h, v) in &f.values {
            out.insert(h.clone(), self.base.mul(v, &g.value(h))?);
        }
        Ok(out)
    }

    /// Pointwise involution.
    pub fn adjoint(&self, f: &InflatedElement) -> Result<InflatedElement> {
        let mut out = InflatedElement::zero();
        for (h, v) in &f.values {
            out.insert(h.clone(), self.base.adjoint(v)?);
        }
        Ok(out)
    }

    /// The extension action: `(alpha_{(n,h)} f)(h') = alpha_{n + omega(h',h)}(f(h'+h))`.
    pub fn action(&self, g: &ExtElem, f: &InflatedElement) -> InflatedElement {
        let (n, h) = g;
        let n_group = self.ext.n_group();
        let h_group = self.ext.h_group();
        let mut out = InflatedElement::zero();
        for h_prime in h_group.elements() {
            let twist = n_group.add(n, self.ext.omega(&h_prime, h));
            let shifted = f.value(&h_group.add(&h_prime, h));
            out.insert(h_prime, self.base.action(&twist, &shifted));
        }
        out
    }

    /// The candidate eigenfunction `f(h') = chi((0, h')) x` of a character.
    ///
    /// When `x` lies in the isotypic component of the restriction of `chi`
    /// to N, the result spans the isotypic component of `chi` over the base
    /// unit component.
    pub fn eigenfunction(&self, chi: &ExtCharacter, x: &GradedElement) -> InflatedElement {
        let n_zero = self.ext.n_group().zero();
        let mut out = InflatedElement::zero();
        for h in self.ext.h_group().elements() {
            let phase = Scalar::phase(chi.phase(&(n_zero.clone(), h.clone())));
            out.insert(h, self.base.scale(x, &phase));
        }
        out
    }

    /// Whether the extension action scales `f` by `chi` at every element.
    pub fn is_eigenfunction(&self, chi: &ExtCharacter, f: &InflatedElement) -> bool {
        self.ext.elements().iter().all(|g| {
            let acted = self.action(g, f);
            let scaled = self.scale(f, &Scalar::phase(chi.phase(g)));
            acted == scaled
        })
    }

    /// Isotypic projection: average the action against the character.
    pub fn isotypic_projection(
        &self,
        chi: &ExtCharacter,
        f: &InflatedElement,
    ) -> Result<InflatedElement> {
        let mut sum = InflatedElement::zero();
        for g in self.ext.elements() {
            let weight = Scalar::phase(chi.phase(&g).scale_int(-1));
            sum = self.add(&sum, &self.scale(&self.action(&g, f), &weight))?;
        }
        let weight = Scalar::from_rational(Ratio::new(1.into(), self.ext.order().into()));
        Ok(self.scale(&sum, &weight))
    }

    /// The outer-automorphism class attached to a character of the extended
    /// group: inflation leaves the spectral data untouched, so this is the
    /// class of the restriction to N.
    pub fn picard_of(&self, chi: &ExtCharacter) -> Result<OutSmoothElement> {
        let restricted = chi.restrict_to_n(&self.ext);
        self.base.picard_of(&restricted)
    }
}
