//! Bimodules implementing Morita self-equivalences of a torus algebra.
//!
//! Every smooth automorphism built from an inner part, a gauge twist, and a
//! lattice transform yields a self-equivalence bimodule: the algebra itself
//! with the right action twisted through the automorphism.  The two inner
//! products are full and satisfy the compatibility identity that makes the
//! bimodule an imprimitivity bimodule, which is checked here symbolically.

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::ratpoly::RatPoly;
use crate::smooth::out::lattice_inverse_apply;
use crate::torus::{ThetaMatrix, TorusElement};

/// A smooth automorphism: conjugation by `U(inner)` after the gauge twist by
/// `gauge` after the lattice transform by `matrix`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismDescriptor {
    pub inner: Vec<i64>,
    pub gauge: Vec<RatPoly>,
    pub matrix: IntMatrix,
}

impl AutomorphismDescriptor {
    pub fn identity(n: usize) -> Self {
        AutomorphismDescriptor {
            inner: vec![0; n],
            gauge: vec![RatPoly::zero(); n],
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.len()
    }

    fn validate(&self, theta: &ThetaMatrix) -> Result<()> {
        let n = theta.dim();
        for got in [self.inner.len(), self.gauge.len(), self.matrix.rows(), self.matrix.cols()] {
            if got != n {
                return Err(Error::DimensionMismatch { expected: n, got });
            }
        }
        Ok(())
    }

    /// Apply the automorphism: lattice transform, gauge twist, inner part.
    pub fn apply(&self, x: &TorusElement) -> Result<TorusElement> {
        x.lattice_transform(&self.matrix)?.gauge_raw(&self.gauge).inner_ad(&self.inner)
    }

    /// Apply the inverse automorphism by unwinding the three layers.
    pub fn apply_inv(&self, x: &TorusElement) -> Result<TorusElement> {
        let neg_inner: Vec<i64> = self.inner.iter().map(|&m| -m).collect();
        let neg_gauge: Vec<RatPoly> = self.gauge.iter().map(|g| g.scale_int(-1)).collect();
        let y = x.inner_ad(&neg_inner)?.gauge_raw(&neg_gauge);
        lattice_inverse_apply(&self.matrix, &y)
    }
}

/// The self-equivalence bimodule of an automorphism: the algebra as a left
/// module over itself, with the right action twisted by the automorphism.
#[derive(Debug, Clone)]
pub struct MoritaModule {
    theta: ThetaMatrix,
    descriptor: AutomorphismDescriptor,
}

/// Report of the bimodule axiom checks on sample elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoritaReport {
    /// Left and right actions are unital, associative, and commute.
    pub actions: bool,
    /// Inner products are adjoint-symmetric and module-linear.
    pub inner_products: bool,
    /// `<x,y>_L . z = x . <y,z>_R` on every sample triple.
    pub compatibility: bool,
}

impl MoritaReport {
    pub fn all_passed(&self) -> bool {
        self.actions && self.inner_products && self.compatibility
    }
}

/// Build the bimodule attached to an automorphism descriptor.
pub fn morita_module_of(
    theta: &ThetaMatrix,
    descriptor: AutomorphismDescriptor,
) -> Result<MoritaModule> {
    descriptor.validate(theta)?;
    // The descriptor must be invertible on the nose, not just formally.
    let probe = TorusElement::generator(theta, 0)?;
    let round = descriptor.apply_inv(&descriptor.apply(&probe)?)?;
    if round != probe {
        return Err(Error::Invalid("automorphism descriptor does not invert cleanly".into()));
    }
    Ok(MoritaModule { theta: theta.clone(), descriptor })
}

impl MoritaModule {
    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn descriptor(&self) -> &AutomorphismDescriptor {
        &self.descriptor
    }

    /// Left action: multiplication in the algebra.
    pub fn left_action(&self, a: &TorusElement, x: &TorusElement) -> Result<TorusElement> {
        a.mul(x)
    }

    /// Right action twisted by the automorphism: `x . a = x alpha(a)`.
    pub fn right_action(&self, x: &TorusElement, a: &TorusElement) -> Result<TorusElement> {
        x.mul(&self.descriptor.apply(a)?)
    }

    /// Left inner product `<x, y>_L = x y^*`.
    pub fn left_inner(&self, x: &TorusElement, y: &TorusElement) -> Result<TorusElement> {
        x.mul(&y.adjoint())
    }

    /// Right inner product `<x, y>_R = alpha^{-1}(x^* y)`.
    pub fn right_inner(&self, x: &TorusElement, y: &TorusElement) -> Result<TorusElement> {
        self.descriptor.apply_inv(&x.adjoint().mul(y)?)
    }

    /// Check the bimodule axioms on all triples drawn from `samples`, with
    /// algebra coefficients drawn from the same list.
    pub fn verify(&self, samples: &[TorusElement]) -> Result<MoritaReport> {
        let one = TorusElement::one(&self.theta);

        let mut actions = true;
        for x in samples {
            actions &= self.left_action(&one, x)? == *x;
            actions &= self.right_action(x, &one)? == *x;
            for a in samples {
                for b in samples {
                    let left_assoc = self.left_action(&a.mul(b)?, x)?
                        == self.left_action(a, &self.left_action(b, x)?)?;
                    let right_assoc = self.right_action(x, &a.mul(b)?)?
                        == self.right_action(&self.right_action(x, a)?, b)?;
                    let commute = self.right_action(&self.left_action(a, x)?, b)?
                        == self.left_action(a, &self.right_action(x, b)?)?;
                    actions &= left_assoc && right_assoc && commute;
                }
            }
        }

        let mut inner_products = true;
        for x in samples {
            for y in samples {
                inner_products &=
                    self.left_inner(x, y)?.adjoint() == self.left_inner(y, x)?;
                inner_products &=
                    self.right_inner(x, y)?.adjoint() == self.right_inner(y, x)?;
                for a in samples {
                    // <x, y.a>_R = <x,y>_R a; <a.x, y>_L = a <x,y>_L.
                    inner_products &= self.right_inner(x, &self.right_action(y, a)?)?
                        == self.right_inner(x, y)?.mul(a)?;
                    inner_products &= self.left_inner(&self.left_action(a, x)?, y)?
                        == a.mul(&self.left_inner(x, y)?)?;
                }
            }
        }

        let mut compatibility = true;
        for x in samples {
            for y in samples {
                for z in samples {
                    let lhs = self.left_inner(x, y)?.mul(z)?;
                    let rhs = self.right_action(x, &self.right_inner(y, z)?)?;
                    compatibility &= lhs == rhs;
                }
            }
        }

        Ok(MoritaReport { actions, inner_products, compatibility })
    }
}
