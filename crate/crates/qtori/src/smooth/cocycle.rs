//! Structure constants for smooth crossed-product coverings.
//!
//! A lift assigns to every dual-group element an automorphism of the base
//! torus algebra (a lattice transform followed by a gauge twist).  Composing
//! two lifted automorphisms agrees with the lift of the product only up to
//! conjugation by a unitary monomial; `compute_cocycle` extracts that
//! monomial for every pair of group elements by comparing the two routes on
//! the algebra generators.  `solve_associativity` then repairs the phase
//! freedom so the table satisfies the exact 2-cocycle identity, or reports
//! an obstruction when no correction exists.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::abgroup::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::phase::{PhaseExponent, Scalar};
use crate::ratpoly::{fmt_rational, RatPoly};
use crate::smooth::graded::{alpha_apply, Lift};
use crate::torus::{ThetaMatrix, TorusElement};

/// One structure constant: a unitary monomial `e(phase) * U(exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaEntry {
    pub exponent: Vec<i64>,
    pub phase: PhaseExponent,
}

impl SigmaEntry {
    pub fn trivial(n: usize) -> Self {
        SigmaEntry { exponent: vec![0; n], phase: PhaseExponent::zero() }
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent.iter().all(|&e| e == 0) && self.phase.is_trivial()
    }

    pub fn monomial(&self, theta: &ThetaMatrix) -> TorusElement {
        TorusElement::monomial(theta, self.exponent.clone(), Scalar::phase(self.phase.clone()))
    }
}

/// Structure constants indexed by pairs of group elements.
pub type SigmaTable = BTreeMap<(Vec<i64>, Vec<i64>), SigmaEntry>;

fn phase_of(x: &TorusElement, what: &str) -> Result<(Vec<i64>, RatPoly)> {
    let (exp, coeff) = x
        .single_term()
        .ok_or_else(|| Error::Invalid(format!("{what}: expected a single monomial")))?;
    let (phase, mag) = coeff
        .single_term()
        .ok_or_else(|| Error::Invalid(format!("{what}: expected a unit-phase coefficient")))?;
    if mag != &BigRational::from_integer(1.into()) {
        return Err(Error::Invalid(format!(
            "{what}: coefficient magnitude {} is not 1",
            fmt_rational(mag)
        )));
    }
    Ok((exp.clone(), phase.as_poly().clone()))
}

/// Structure constants of the twisted product determined by `lifts`.
///
/// The lift at group element chi acts as the automorphism
/// `gauge(x(chi)) . lattice(M(chi))`, and the table entry at (chi1, chi2) is
/// the unique unitary monomial sigma with
/// `alpha_{chi1} . alpha_{chi2} = Ad[sigma] . alpha_{chi1 chi2}`.
/// Fails with `DefectNotInLattice` when the phase defect between the two
/// composition routes is not realized by an inner monomial.
pub fn compute_cocycle(
    theta: &ThetaMatrix,
    group: &FiniteAbelianGroup,
    lifts: &[Lift],
) -> Result<SigmaTable> {
    let n = theta.dim();
    if n != 2 {
        return Err(Error::Invalid(format!("smooth coverings require dimension 2, got {n}")));
    }
    let elements = group.elements();
    if lifts.len() != elements.len() {
        return Err(Error::Invalid(format!(
            "expected {} lifts, got {}",
            elements.len(),
            lifts.len()
        )));
    }
    let theta12 = theta.entry(0, 1);

    let mut table = SigmaTable::new();
    for c1 in &elements {
        let l1 = &lifts[group.element_index(c1)];
        for c2 in &elements {
            let l2 = &lifts[group.element_index(c2)];
            let c3 = group.add(c1, c2);
            let l3 = &lifts[group.element_index(&c3)];
            if l2.m.mul(&l1.m) != l3.m {
                return Err(Error::NotHomomorphism(format!(
                    "lattice parts do not compose: M({c2:?}) M({c1:?}) != M({c3:?})"
                )));
            }
            let m3_inv = l3.m.inverse_unimodular()?;

            // Phase defect of the two routes on each generator.
            let mut defect = Vec::with_capacity(n);
            for k in 0..n {
                let gen = TorusElement::generator(theta, k)?;
                let two_step = alpha_apply(l1, &alpha_apply(l2, &gen)?)?;
                let one_step = alpha_apply(l3, &gen)?;
                let (exp_a, phase_a) = phase_of(&two_step, "composed lift")?;
                let (exp_b, phase_b) = phase_of(&one_step, "direct lift")?;
                if exp_a != exp_b {
                    return Err(Error::NotHomomorphism(format!(
                        "lift routes disagree on generator exponents at ({c1:?}, {c2:?})"
                    )));
                }
                defect.push(&phase_a - &phase_b);
            }

            // delta_k = <row k of M3, D>, so D = M3^{-1} delta.  Each
            // component must be integral in both affine coordinates for the
            // defect to come from conjugation by a lattice monomial.
            let mut q = Vec::with_capacity(n);
            for i in 0..n {
                let mut di = RatPoly::zero();
                for (k, d) in defect.iter().enumerate() {
                    di = &di + &d.scale_int(m3_inv[(i, k)]);
                }
                let (a, b) = di.decompose_affine(theta12).ok_or_else(|| {
                    Error::DefectNotInLattice {
                        chi1: format!("{c1:?}"),
                        chi2: format!("{c2:?}"),
                        detail: "defect is not an affine function of theta".into(),
                    }
                })?;
                if !a.is_integer() || !b.is_integer() {
                    return Err(Error::DefectNotInLattice {
                        chi1: format!("{c1:?}"),
                        chi2: format!("{c2:?}"),
                        detail: format!(
                            "component {} + ({})*theta is not a lattice translation",
                            fmt_rational(&a),
                            fmt_rational(&b)
                        ),
                    });
                }
                q.push(b.to_integer().try_into().map_err(|_| {
                    Error::Invalid("defect coordinate exceeds machine integers".into())
                })?);
            }

            // Ad[U(a, b)] is the gauge twist by (-b theta, a theta), so the
            // defect (q1 theta, q2 theta) is inner for U(q2, -q1).
            let exponent: Vec<i64> = vec![q[1], -q[0]];
            table.insert((c1.clone(), c2.clone()), SigmaEntry {
                exponent,
                phase: PhaseExponent::zero(),
            });
        }
    }
    Ok(table)
}

fn sigma_monomial(
    theta: &ThetaMatrix,
    table: &SigmaTable,
    c1: &[i64],
    c2: &[i64],
) -> Result<TorusElement> {
    let entry = table
        .get(&(c1.to_vec(), c2.to_vec()))
        .ok_or_else(|| Error::Invalid(format!("sigma table has no entry at ({c1:?}, {c2:?})")))?;
    Ok(entry.monomial(theta))
}

/// Associator phases of a sigma table: one row per triple of group elements.
///
/// Row i carries the integer coefficient pattern of the normalized unknown
/// phases and the rational polynomial the corrected phases must hit.
struct AssocSystem {
    unknowns: Vec<(Vec<i64>, Vec<i64>)>,
    rows: Vec<(Vec<i64>, RatPoly)>,
}

fn associator_rows(
    theta: &ThetaMatrix,
    group: &FiniteAbelianGroup,
    lifts: &[Lift],
    table: &SigmaTable,
) -> Result<AssocSystem> {
    let elements = group.elements();
    let zero = group.zero();

    // Unknown phase corrections live on pairs with both entries non-unit;
    // the unit slots are pinned to 1 because e_1 must be the algebra unit.
    let unknowns: Vec<(Vec<i64>, Vec<i64>)> = elements
        .iter()
        .filter(|c| **c != zero)
        .flat_map(|c1| {
            elements.iter().filter(|c| **c != zero).map(move |c2| (c1.clone(), c2.clone()))
        })
        .collect();
    let slot: BTreeMap<&(Vec<i64>, Vec<i64>), usize> =
        unknowns.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut rows = Vec::new();
    for c1 in &elements {
        let l1 = &lifts[group.element_index(c1)];
        for c2 in &elements {
            let c12 = group.add(c1, c2);
            for c3 in &elements {
                let c23 = group.add(c2, c3);
                let lhs = sigma_monomial(theta, table, c1, c2)?
                    .mul(&sigma_monomial(theta, table, &c12, c3)?)?;
                let rhs = alpha_apply(l1, &sigma_monomial(theta, table, c2, c3)?)?
                    .mul(&sigma_monomial(theta, table, c1, &c23)?)?;
                let (exp_l, phase_l) = phase_of(&lhs, "associator lhs")?;
                let (exp_r, phase_r) = phase_of(&rhs, "associator rhs")?;
                if exp_l != exp_r {
                    return Err(Error::Obstruction(format!(
                        "associator at ({c1:?}, {c2:?}, {c3:?}) has a non-scalar defect: \
                         U({exp_l:?}) vs U({exp_r:?})"
                    )));
                }
                // Corrections beta enter as
                //   beta(c2,c3) + beta(c1,c23) - beta(c1,c2) - beta(c12,c3),
                // which must equal phase(lhs) - phase(rhs).
                let mut coeffs = vec![0i64; unknowns.len()];
                let mut bump = |a: &[i64], b: &[i64], sign: i64| {
                    if let Some(&j) = slot.get(&(a.to_vec(), b.to_vec())) {
                        coeffs[j] += sign;
                    }
                };
                bump(c2, c3, 1);
                bump(c1, &c23, 1);
                bump(c1, c2, -1);
                bump(&c12, c3, -1);
                rows.push((coeffs, &phase_l - &phase_r));
            }
        }
    }
    Ok(AssocSystem { unknowns, rows })
}

/// Solve `A beta = a` for one coefficient degree via the Smith form of A.
///
/// For degree zero the equation only holds modulo 1, so zero rows of the
/// Smith form demand an integer target instead of an exact zero; nonzero
/// pivots are always satisfiable because the unknowns range over rationals.
fn solve_degree(
    a: &IntMatrix,
    target: &[BigRational],
    modular: bool,
) -> Option<Vec<BigRational>> {
    let (d, u, v) = a.snf();
    let (rows, cols) = (target.len(), a.cols());
    let mut ut = vec![BigRational::zero(); rows];
    for i in 0..rows {
        for (j, t) in target.iter().enumerate() {
            if !t.is_zero() {
                ut[i] += BigRational::from_integer(u[(i, j)].into()) * t;
            }
        }
    }
    let mut eta = vec![BigRational::zero(); cols];
    for i in 0..rows {
        let pivot = if i < cols { d[(i, i)] } else { 0 };
        if pivot != 0 {
            eta[i] = &ut[i] / BigRational::from_integer(pivot.into());
        } else {
            let ok = if modular { ut[i].is_integer() } else { ut[i].is_zero() };
            if !ok {
                return None;
            }
        }
    }
    let mut beta = vec![BigRational::zero(); cols];
    for i in 0..cols {
        for (j, e) in eta.iter().enumerate() {
            if !e.is_zero() {
                beta[i] += BigRational::from_integer(v[(i, j)].into()) * e;
            }
        }
    }
    Some(beta)
}

/// Correct the phases of a sigma table so the 2-cocycle identity holds on
/// every triple of group elements, or report the cohomological obstruction.
///
/// Only normalized corrections are admitted: the entries at pairs involving
/// the unit stay fixed, since `e_1` has to act as the multiplicative unit of
/// the covering algebra.  An associator defect that could only be absorbed
/// by twisting the unit slots is therefore a genuine obstruction.
pub fn solve_associativity(
    theta: &ThetaMatrix,
    group: &FiniteAbelianGroup,
    lifts: &[Lift],
    table: &SigmaTable,
) -> Result<SigmaTable> {
    let system = associator_rows(theta, group, lifts, table)?;
    let n_unknowns = system.unknowns.len();
    let coeff_matrix = IntMatrix::from_rows(
        system
            .rows
            .iter()
            .map(|(c, _)| {
                let mut row = c.clone();
                row.resize(n_unknowns.max(1), 0);
                row
            })
            .collect(),
    );

    // Each coefficient degree separates: degree zero is a condition mod 1,
    // higher degrees are exact rational conditions.
    let mut degrees: Vec<u32> = system
        .rows
        .iter()
        .flat_map(|(_, a)| a.degrees().collect::<Vec<_>>())
        .collect();
    degrees.sort_unstable();
    degrees.dedup();

    let mut correction = vec![RatPoly::zero(); n_unknowns];
    for deg in degrees {
        let target: Vec<BigRational> =
            system.rows.iter().map(|(_, a)| a.coeff(deg)).collect();
        let beta = solve_degree(&coeff_matrix, &target, deg == 0).ok_or_else(|| {
            let detail = if deg == 0 {
                "constant phases".to_string()
            } else {
                format!("degree-{deg} coefficients")
            };
            Error::Obstruction(format!(
                "associator defect in the {detail} is not a coboundary of any \
                 normalized 2-cochain: the covering has no associative twisted product"
            ))
        })?;
        for (i, b) in beta.into_iter().enumerate() {
            if !b.is_zero() {
                correction[i] = &correction[i] + &RatPoly::term(b, deg);
            }
        }
    }

    let mut corrected = table.clone();
    for (pair, poly) in system.unknowns.iter().zip(correction) {
        if poly.is_zero() {
            continue;
        }
        let entry = corrected
            .get_mut(pair)
            .ok_or_else(|| Error::Invalid(format!("sigma table has no entry at {pair:?}")))?;
        entry.phase = PhaseExponent::new(entry.phase.as_poly() + &poly);
    }

    // The correction was solved degree by degree; confirm the full identity.
    let check = associator_rows(theta, group, lifts, &corrected)?;
    for ((coeffs, residue), (c1, c2, c3)) in check.rows.iter().zip(triples(group)) {
        let _ = coeffs;
        if !PhaseExponent::new(residue.clone()).is_trivial() {
            return Err(Error::Obstruction(format!(
                "correction failed to close the associator at ({c1:?}, {c2:?}, {c3:?})"
            )));
        }
    }
    Ok(corrected)
}

fn triples(group: &FiniteAbelianGroup) -> Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> {
    let elements = group.elements();
    let mut out = Vec::with_capacity(elements.len().pow(3));
    for c1 in &elements {
        for c2 in &elements {
            for c3 in &elements {
                out.push((c1.clone(), c2.clone(), c3.clone()));
            }
        }
    }
    out
}

/// Verify the 2-cocycle identity of a table on every triple, returning the
/// first failing triple if any.
pub fn verify_cocycle_identity(
    theta: &ThetaMatrix,
    group: &FiniteAbelianGroup,
    lifts: &[Lift],
    table: &SigmaTable,
) -> Result<Option<(Vec<i64>, Vec<i64>, Vec<i64>)>> {
    let system = associator_rows(theta, group, lifts, table)?;
    for ((_, residue), triple) in system.rows.iter().zip(triples(group)) {
        if !PhaseExponent::new(residue.clone()).is_trivial() {
            return Ok(Some(triple));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::RatPoly;
    use crate::smooth::out::{check_homomorphism, hom_image, OutSmoothElement, TorusPoint};
    use crate::torus::ThetaMatrix;
    use num::rational::Ratio;

    fn rat(n: i64, d: i64) -> BigRational {
        Ratio::new(n.into(), d.into())
    }

    fn lifts_from_images(
        group: &FiniteAbelianGroup,
        images: &[OutSmoothElement],
    ) -> Vec<Lift> {
        group
            .elements()
            .iter()
            .map(|chi| {
                let out = hom_image(images, chi);
                Lift { x: out.gauge_lift(), m: out.matrix().clone() }
            })
            .collect()
    }

    fn c2_half_shift() -> (ThetaMatrix, FiniteAbelianGroup, Vec<Lift>) {
        let theta = ThetaMatrix::standard_2d();
        let group = FiniteAbelianGroup::new(vec![2]).unwrap();
        let image = OutSmoothElement::new(
            vec![TorusPoint::new(rat(1, 2), rat(0, 1)), TorusPoint::zero()],
            IntMatrix::identity(2),
        )
        .unwrap();
        let report = check_homomorphism(&group, &[image.clone()]);
        assert!(report.homomorphism && report.injective);
        let lifts = lifts_from_images(&group, &[image]);
        (theta, group, lifts)
    }

    fn c2_theta_shift() -> (ThetaMatrix, FiniteAbelianGroup, Vec<Lift>) {
        let theta = ThetaMatrix::standard_2d();
        let group = FiniteAbelianGroup::new(vec![2]).unwrap();
        let image = OutSmoothElement::new(
            vec![TorusPoint::new(rat(0, 1), rat(1, 2)), TorusPoint::zero()],
            IntMatrix::identity(2),
        )
        .unwrap();
        let lifts = lifts_from_images(&group, &[image]);
        (theta, group, lifts)
    }

    #[test]
    fn rational_shift_has_trivial_cocycle() {
        let (theta, group, lifts) = c2_half_shift();
        let table = compute_cocycle(&theta, &group, &lifts).unwrap();
        for entry in table.values() {
            assert!(entry.is_trivial());
        }
        let solved = solve_associativity(&theta, &group, &lifts, &table).unwrap();
        assert_eq!(solved, table);
    }

    #[test]
    fn theta_shift_produces_lattice_cocycle() {
        // Translation by theta/2 in the first coordinate squares to
        // translation by theta, which is conjugation by v^{-1}.
        let (theta, group, lifts) = c2_theta_shift();
        let table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let nontrivial = table.get(&(vec![1], vec![1])).unwrap();
        assert_eq!(nontrivial.exponent, vec![0, -1]);
        assert!(table.get(&(vec![0], vec![1])).unwrap().is_trivial());
        assert!(table.get(&(vec![1], vec![0])).unwrap().is_trivial());
        let solved = solve_associativity(&theta, &group, &lifts, &table).unwrap();
        assert!(verify_cocycle_identity(&theta, &group, &lifts, &solved).unwrap().is_none());
    }

    #[test]
    fn minus_identity_lift_is_associative() {
        let theta = ThetaMatrix::standard_2d();
        let group = FiniteAbelianGroup::new(vec![2]).unwrap();
        let image = OutSmoothElement::new(
            vec![TorusPoint::zero(), TorusPoint::zero()],
            IntMatrix::identity(2).scale_int(-1),
        )
        .unwrap();
        let lifts = lifts_from_images(&group, &[image]);
        let table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let solved = solve_associativity(&theta, &group, &lifts, &table).unwrap();
        assert!(verify_cocycle_identity(&theta, &group, &lifts, &solved).unwrap().is_none());
    }

    #[test]
    fn c3_rotation_lift_is_associative() {
        let theta = ThetaMatrix::standard_2d();
        let group = FiniteAbelianGroup::new(vec![3]).unwrap();
        let m = IntMatrix::mat2(0, 1, -1, -1);
        let image = OutSmoothElement::new(
            vec![TorusPoint::new(rat(1, 7), rat(0, 1)), TorusPoint::new(rat(2, 7), rat(0, 1))],
            m,
        )
        .unwrap();
        let report = check_homomorphism(&group, &[image.clone()]);
        assert!(report.homomorphism && report.injective);
        let lifts = lifts_from_images(&group, &[image]);
        let table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let solved = solve_associativity(&theta, &group, &lifts, &table).unwrap();
        assert!(verify_cocycle_identity(&theta, &group, &lifts, &solved).unwrap().is_none());
    }

    #[test]
    fn diagonal_perturbation_is_a_cocycle_shift() {
        // A phase on sigma(chi, chi) is itself a 2-cocycle for C_2: the
        // perturbed table stays associative (in a different cohomology
        // class), so the solver has nothing to repair and keeps it.
        let (theta, group, lifts) = c2_half_shift();
        let mut table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let entry = table.get_mut(&(vec![1], vec![1])).unwrap();
        entry.phase = PhaseExponent::from_rational(rat(1, 3));
        assert!(verify_cocycle_identity(&theta, &group, &lifts, &table).unwrap().is_none());
        let solved = solve_associativity(&theta, &group, &lifts, &table).unwrap();
        assert_eq!(solved, table);
    }

    #[test]
    fn perturbed_unit_entry_is_an_obstruction() {
        // A phase on sigma(1, chi) breaks unitality of e_1; no normalized
        // correction can absorb it.
        let (theta, group, lifts) = c2_half_shift();
        let mut table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let entry = table.get_mut(&(vec![0], vec![1])).unwrap();
        entry.phase = PhaseExponent::from_rational(rat(1, 3));
        let err = solve_associativity(&theta, &group, &lifts, &table).unwrap_err();
        assert!(matches!(err, Error::Obstruction(_)), "got {err:?}");
    }

    #[test]
    fn theta_degree_perturbation_is_detected() {
        let (theta, group, lifts) = c2_half_shift();
        let mut table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let entry = table.get_mut(&(vec![0], vec![1])).unwrap();
        entry.phase = PhaseExponent::new(RatPoly::term(rat(1, 2), 1));
        let err = solve_associativity(&theta, &group, &lifts, &table).unwrap_err();
        assert!(matches!(err, Error::Obstruction(_)), "got {err:?}");
    }

    #[test]
    fn nonscalar_defect_is_a_hard_error() {
        let (theta, group, lifts) = c2_half_shift();
        let mut table = compute_cocycle(&theta, &group, &lifts).unwrap();
        let entry = table.get_mut(&(vec![1], vec![1])).unwrap();
        entry.exponent = vec![1, 0];
        let err = solve_associativity(&theta, &group, &lifts, &table).unwrap_err();
        assert!(matches!(err, Error::Obstruction(_)), "got {err:?}");
    }
}
