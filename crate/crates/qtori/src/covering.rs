//! Connected coverings of a quantum n-torus: solving the deformation
//! congruence M·θ′·Mᵀ ∈ θ + Mₙ(ℤ), assembling the covering system (embedded
//! generators plus the finite gauge action), verifying its defining
//! properties at finite support, classifying coverings up to an index
//! bound, and the profinite poset of structure groups.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use rayon::prelude::*;

use crate::abgroup::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::lattice::{enumerate_sublattices, QuotientGroup, IntMatrix};
use crate::phase::{PhaseExponent, Scalar};
use crate::ratpoly::{rat_mod1, RatPoly};
use crate::torus::{ThetaMatrix, TorusElement};

/// The data of one covering: base θ, sublattice basis M, integer correction
/// K, and the deformed matrix θ′ = M⁻¹(θ+K)M⁻ᵀ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringSpec {
    pub theta: ThetaMatrix,
    pub m: IntMatrix,
    pub k: IntMatrix,
    pub theta_prime: ThetaMatrix,
}

/// A covering system: the algebra over θ′ carrying an action of ℤⁿ/Mℤⁿ by
/// gauge automorphisms, with the base algebra embedded as the fixed points
/// via u_k ↦ U(Mᵀe_k).
#[derive(Clone, Debug)]
pub struct CoveringSystem {
    pub spec: CoveringSpec,
    pub group: QuotientGroup,
    /// Gauge parameter s(m) = M⁻¹m per coset representative, aligned with
    /// `group.representatives()`.
    pub gauge_params: Vec<Vec<BigRational>>,
    /// Embedded generators ι(u_k) = U(row k of M) in the θ′-algebra.
    pub embedding: Vec<TorusElement>,
}

fn check_square_match(theta: &ThetaMatrix, m: &IntMatrix) -> Result<()> {
    let n = theta.dim();
    if !m.is_square() || m.rows() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
    }
    Ok(())
}

fn check_skew_integer(k: &IntMatrix) -> Result<()> {
    for i in 0..k.rows() {
        for j in 0..k.cols() {
            if k[(i, j)] != -k[(j, i)] {
                return Err(Error::NotSkew);
            }
        }
    }
    Ok(())
}

/// θ′ = M⁻¹(θ+K)M⁻ᵀ, computed exactly as adj(M)·(θ+K)·adj(M)ᵀ / det(M)².
pub fn solve_theta_prime(theta: &ThetaMatrix, m: &IntMatrix, k: &IntMatrix) -> Result<ThetaMatrix> {
    check_square_match(theta, m)?;
    if k.rows() != m.rows() || k.cols() != m.cols() {
        return Err(Error::DimensionMismatch { expected: m.rows(), got: k.rows() });
    }
    check_skew_integer(k)?;
    let n = theta.dim();
    let det = m.det();
    if det == 0 {
        return Err(Error::SingularMatrix);
    }
    let adj = m.adjugate();
    // S = θ + K entrywise.
    let s: Vec<RatPoly> = (0..n * n)
        .map(|idx| theta.entry(idx / n, idx % n) + &RatPoly::from_int(k[(idx / n, idx % n)]))
        .collect();
    // adj · S · adjᵀ, then divide by det².
    let inv_det2 = BigRational::new(BigInt::one(), BigInt::from(det) * BigInt::from(det));
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatPoly::zero();
            for p in 0..n {
                for q in 0..n {
                    let c = adj[(i, p)] * adj[(j, q)];
                    if c != 0 {
                        acc = &acc + &s[p * n + q].scale_int(c);
                    }
                }
            }
            entries.push(acc.scale(&inv_det2));
        }
    }
    let theta_prime = ThetaMatrix::new(n, entries)?;
    debug_assert_eq!(&transport(&theta_prime, m), &add_int_matrix(theta, k));
    Ok(theta_prime)
}

/// M·θ′·Mᵀ entrywise.
fn transport(theta_prime: &ThetaMatrix, m: &IntMatrix) -> Vec<RatPoly> {
    let n = theta_prime.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = RatPoly::zero();
            for p in 0..n {
                for q in 0..n {
                    let c = m[(i, p)] * m[(j, q)];
                    if c != 0 {
                        acc = &acc + &theta_prime.entry(p, q).scale_int(c);
                    }
                }
            }
            out.push(acc);
        }
    }
    out
}

fn add_int_matrix(theta: &ThetaMatrix, k: &IntMatrix) -> Vec<RatPoly> {
    let n = theta.dim();
    (0..n * n)
        .map(|idx| theta.entry(idx / n, idx % n) + &RatPoly::from_int(k[(idx / n, idx % n)]))
        .collect()
}

/// All skew integer corrections with |K_{kℓ}| ≤ bound, as their θ′ matrices.
/// Duplicate θ′ are removed; enumeration order is lexicographic in the upper
/// triangle.
pub fn enumerate_theta_corrections(
    theta: &ThetaMatrix,
    m: &IntMatrix,
    bound: i64,
) -> Result<Vec<(IntMatrix, ThetaMatrix)>> {
    check_square_match(theta, m)?;
    let n = theta.dim();
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let mut values = vec![-bound; slots.len()];
    let mut out: Vec<(IntMatrix, ThetaMatrix)> = Vec::new();
    loop {
        let mut k = IntMatrix::zeros(n, n);
        for (&(i, j), &v) in slots.iter().zip(&values) {
            k[(i, j)] = v;
            k[(j, i)] = -v;
        }
        let tp = solve_theta_prime(theta, m, &k)?;
        if !out.iter().any(|(_, existing)| existing == &tp) {
            out.push((k, tp));
        }
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] <= bound {
                break;
            }
            values[pos] = -bound;
        }
    }
}

/// Assemble the system from already-validated data.
fn assemble_system(spec: CoveringSpec) -> Result<CoveringSystem> {
    let n = spec.theta.dim();
    let group = QuotientGroup::new(&spec.m)?;
    let det = spec.m.det();
    let adj = spec.m.adjugate();
    let gauge_params = group
        .representatives()
        .into_iter()
        .map(|rep| {
            (0..n)
                .map(|i| {
                    let num: i64 = (0..n).map(|j| adj[(i, j)] * rep[j]).sum();
                    BigRational::new(BigInt::from(num), BigInt::from(det))
                })
                .collect()
        })
        .collect();
    let embedding = (0..n)
        .map(|k| TorusElement::monomial(&spec.theta_prime, spec.m.row(k), Scalar::one()))
        .collect();
    Ok(CoveringSystem { spec, group, gauge_params, embedding })
}

/// Build the covering determined by (θ, M, θ′), deriving the correction
/// K = Mθ′Mᵀ − θ; rejects inputs where K fails to be an integer matrix.
pub fn build_connected_covering(
    theta: &ThetaMatrix,
    m: &IntMatrix,
    theta_prime: &ThetaMatrix,
) -> Result<CoveringSystem> {
    check_square_match(theta, m)?;
    check_square_match(theta_prime, m)?;
    if m.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    let n = theta.dim();
    let transported = transport(theta_prime, m);
    let mut k = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let diff = &transported[i * n + j] - theta.entry(i, j);
            if !diff.is_integer() {
                return Err(Error::RelationViolated { row: i + 1, col: j + 1, entry: diff.to_string() });
            }
            let c: BigInt = diff.constant_part().to_integer();
            k[(i, j)] = i64::try_from(&c).map_err(|_| Error::Invalid("correction entry overflows i64".into()))?;
        }
    }
    check_skew_integer(&k)?;
    assemble_system(CoveringSpec {
        theta: theta.clone(),
        m: m.clone(),
        k,
        theta_prime: theta_prime.clone(),
    })
}

/// Build a system without the consistency check, for negative-control
/// experiments: the spec is taken at face value even if inconsistent.
pub fn assemble_unchecked(spec: CoveringSpec) -> Result<CoveringSystem> {
    assemble_system(spec)
}

/// Outcome of the finite-support verification of a covering system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    /// (a) coset representatives shifted by lattice vectors act identically.
    pub action_well_defined: bool,
    /// (b) embedded generators satisfy the base commutation relations.
    pub relations_embed: bool,
    /// (b) a monomial is fixed by the action iff its exponent lies in Mᵀℤⁿ.
    pub fixed_support_matches: bool,
    /// (b) every fixed monomial in the box is a product of embedded
    /// generators times a unit phase.
    pub fixed_algebra_generated: bool,
    /// (c) number of characters of ℤⁿ/Mℤⁿ.
    pub characters_total: i64,
    /// (c) characters whose isotypic component contains a boxed monomial.
    pub characters_covered: i64,
    /// (d) the full gauge action restricts to the base one on generators.
    pub lift_restricts: bool,
    /// (d) full gauge automorphisms commute with the finite action.
    pub lift_commutes: bool,
    /// (d) no nonzero boxed monomial is fixed by every gauge automorphism.
    pub lift_ergodic: bool,
}

impl CoveringReport {
    pub fn action_free(&self) -> bool {
        self.characters_covered == self.characters_total
    }

    pub fn all_passed(&self) -> bool {
        self.action_well_defined
            && self.relations_embed
            && self.fixed_support_matches
            && self.fixed_algebra_generated
            && self.action_free()
            && self.lift_restricts
            && self.lift_commutes
            && self.lift_ergodic
    }
}

fn box_exponents(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * (2 * bound + 1) as usize);
        for e in out {
            for x in -bound..=bound {
                let mut v = e.clone();
                v.push(x);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

fn rational_gauge(element: &TorusElement, s: &[BigRational]) -> TorusElement {
    let polys: Vec<RatPoly> = s.iter().map(|r| RatPoly::constant(r.clone())).collect();
    element.gauge_raw(&polys)
}

fn pairing_mod1(s: &[BigRational], lam: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (r, &x) in s.iter().zip(lam) {
        acc += r * BigRational::from_integer(BigInt::from(x));
    }
    rat_mod1(&acc)
}

/// Verify the covering properties on all monomials with |λ|∞ ≤ support_bound.
pub fn check_connected_covering(sys: &CoveringSystem, support_bound: i64) -> CoveringReport {
    let n = sys.spec.theta.dim();
    let tp = &sys.spec.theta_prime;
    let m = &sys.spec.m;
    let mt = m.transpose();
    let exponents = box_exponents(n, support_bound);
    let reps = sys.group.representatives();

    // (a) shifting a representative by a lattice basis vector leaves the
    // gauge action on every boxed monomial unchanged.
    let mut action_well_defined = true;
    for (rep, s) in reps.iter().zip(&sys.gauge_params) {
        for j in 0..n {
            let shifted: Vec<i64> = rep.iter().zip(m.col(j)).map(|(&a, b)| a + b).collect();
            let det = m.det();
            let adj = m.adjugate();
            let s2: Vec<BigRational> = (0..n)
                .map(|i| {
                    let num: i64 = (0..n).map(|p| adj[(i, p)] * shifted[p]).sum();
                    BigRational::new(BigInt::from(num), BigInt::from(det))
                })
                .collect();
            for lam in &exponents {
                let mono = TorusElement::monomial(tp, lam.clone(), Scalar::one());
                if rational_gauge(&mono, s) != rational_gauge(&mono, &s2) {
                    action_well_defined = false;
                }
            }
        }
    }

    // (b) embedded generators reproduce the base commutation phases:
    // the commutator pairing of rows k, ℓ of M under θ′ equals θ_{kℓ}.
    let mut relations_embed = true;
    for k in 0..n {
        for l in 0..n {
            if k == l {
                continue;
            }
            let pairing = tp.commutator_pairing(&m.row(k), &m.row(l));
            if pairing != PhaseExponent::new(sys.spec.theta.entry(k, l).clone()) {
                relations_embed = false;
            }
        }
    }

    // (b) fixed support: U(λ) is fixed by every coset's gauge ⟺ λ ∈ Mᵀℤⁿ.
    let mut fixed_support_matches = true;
    let mut fixed_algebra_generated = true;
    for lam in &exponents {
        let mono = TorusElement::monomial(tp, lam.clone(), Scalar::one());
        let fixed = sys.gauge_params.iter().all(|s| rational_gauge(&mono, s) == mono);
        let in_sublattice = mt.solve_integer(lam);
        if fixed != in_sublattice.is_some() {
            fixed_support_matches = false;
        }
        if let Some(c) = in_sublattice {
            // Ordered product of embedded generator powers must give back
            // the monomial up to a unit phase.
            let mut prod = TorusElement::one(tp);
            let mut ok = true;
            for (k, &ck) in c.iter().enumerate() {
                match sys.embedding[k].monomial_pow(ck).and_then(|p| prod.mul(&p)) {
                    Ok(next) => prod = next,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            let matches = ok
                && match prod.single_term() {
                    Some((exp, coeff)) => exp == lam && coeff.is_unit_phase(),
                    None => false,
                };
            if !matches {
                fixed_algebra_generated = false;
            }
        }
    }

    // (c) freeness: each character of ℤⁿ/Mℤⁿ — a fingerprint of pairing
    // values on the coset representatives — is realized by some boxed
    // monomial's isotypic component.
    let dual = QuotientGroup::new(&mt).expect("dual lattice quotient");
    let characters_total = dual.index();
    let mut fingerprints: std::collections::BTreeSet<Vec<BigRational>> = Default::default();
    for lam in &exponents {
        let fp: Vec<BigRational> = sys.gauge_params.iter().map(|s| pairing_mod1(s, lam)).collect();
        fingerprints.insert(fp);
    }
    let characters_covered = fingerprints.len() as i64;

    // (d) the lift restricts: gauging by M⁻¹s multiplies ι(u_k) by e(s_k).
    let det = m.det();
    let adj = m.adjugate();
    let lift_param = |s: &[BigRational]| -> Vec<BigRational> {
        (0..n)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (p, sp) in s.iter().enumerate() {
                    acc += BigRational::from_integer(BigInt::from(adj[(i, p)])) * sp;
                }
                acc / BigRational::from_integer(BigInt::from(det))
            })
            .collect()
    };
    let samples: Vec<Vec<BigRational>> = {
        let mut out = Vec::new();
        for j in 0..n {
            let mut s = vec![BigRational::zero(); n];
            s[j] = BigRational::new(BigInt::one(), BigInt::from(2));
            out.push(s);
        }
        out.push((0..n).map(|j| BigRational::new(BigInt::one(), BigInt::from(2 * j as i64 + 3))).collect());
        out
    };
    let mut lift_restricts = true;
    for s in &samples {
        let r = lift_param(s);
        for (k, gen) in sys.embedding.iter().enumerate() {
            let expected = gen.scale(&Scalar::phase(PhaseExponent::from_rational(s[k].clone())));
            if rational_gauge(gen, &r) != expected {
                lift_restricts = false;
            }
        }
    }

    // (d) the lift commutes with the finite action.
    let mut lift_commutes = true;
    let r_sample = lift_param(&samples[samples.len() - 1]);
    for s in &sys.gauge_params {
        for lam in &exponents {
            let mono = TorusElement::monomial(tp, lam.clone(), Scalar::one());
            let ab = rational_gauge(&rational_gauge(&mono, s), &r_sample);
            let ba = rational_gauge(&rational_gauge(&mono, &r_sample), s);
            if ab != ba {
                lift_commutes = false;
            }
        }
    }

    // (d) ergodicity at finite support: every nonzero boxed monomial is
    // moved by some gauge parameter.
    let mut lift_ergodic = true;
    for lam in &exponents {
        if lam.iter().all(|&x| x == 0) {
            continue;
        }
        let j = lam.iter().position(|&x| x != 0).unwrap();
        let mut witness = vec![BigRational::zero(); n];
        witness[j] = BigRational::new(BigInt::one(), BigInt::from(2 * lam[j].abs()));
        let mono = TorusElement::monomial(tp, lam.clone(), Scalar::one());
        if rational_gauge(&mono, &witness) == mono {
            lift_ergodic = false;
        }
    }

    CoveringReport {
        action_well_defined,
        relations_embed,
        fixed_support_matches,
        fixed_algebra_generated,
        characters_total,
        characters_covered,
        lift_restricts,
        lift_commutes,
        lift_ergodic,
    }
}

/// One row of the classification table: a sublattice together with one
/// admissible correction and its verified covering.
#[derive(Clone, Debug)]
pub struct ClassificationRow {
    pub m: IntMatrix,
    pub index: i64,
    pub invariant_factors: Vec<i64>,
    pub k: IntMatrix,
    pub theta_prime: ThetaMatrix,
    pub report: CoveringReport,
}

/// Enumerate all coverings with sublattice index ≤ max_index and correction
/// entries bounded by correction_bound; each row carries its verification
/// report at the given support bound. Rows are ordered by (index, M, K).
pub fn classify_coverings(
    theta: &ThetaMatrix,
    max_index: i64,
    correction_bound: i64,
    support_bound: i64,
) -> Result<Vec<ClassificationRow>> {
    let n = theta.dim();
    let sublattices = enumerate_sublattices(n, max_index);
    let rows: Vec<Result<Vec<ClassificationRow>>> = sublattices
        .par_iter()
        .map(|m| {
            let group = QuotientGroup::new(m)?;
            let corrections = enumerate_theta_corrections(theta, m, correction_bound)?;
            corrections
                .into_iter()
                .map(|(k, tp)| {
                    let sys = build_connected_covering(theta, m, &tp)?;
                    let report = check_connected_covering(&sys, support_bound);
                    Ok(ClassificationRow {
                        m: m.clone(),
                        index: group.index(),
                        invariant_factors: group.invariant_factors().to_vec(),
                        k,
                        theta_prime: tp,
                        report,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for group_rows in rows {
        out.extend(group_rows?);
    }
    Ok(out)
}

/// A node of the profinite poset: one sublattice with the structure of its
/// quotient group.
#[derive(Clone, Debug)]
pub struct TowerNode {
    pub m: IntMatrix,
    pub index: i64,
    pub invariant_factors: Vec<i64>,
}

/// A connecting surjection ℤⁿ/Γ → ℤⁿ/Γ′ for Γ ⊆ Γ′, written on
/// invariant-factor coordinates of source and target.
#[derive(Clone, Debug)]
pub struct TowerEdge {
    pub from: usize,
    pub to: usize,
    pub map: IntMatrix,
}

#[derive(Clone, Debug)]
pub struct ProfiniteTower {
    pub nodes: Vec<TowerNode>,
    pub edges: Vec<TowerEdge>,
}

struct NodeCoords {
    u: IntMatrix,
    u_inv: IntMatrix,
    diag: Vec<i64>,
    keep: Vec<usize>,
}

impl NodeCoords {
    fn new(m: &IntMatrix) -> Result<Self> {
        let (d, u, _) = m.snf();
        let n = m.rows();
        let diag: Vec<i64> = (0..n).map(|i| d[(i, i)]).collect();
        let keep: Vec<usize> = (0..n).filter(|&i| diag[i] > 1).collect();
        Ok(NodeCoords { u_inv: u.inverse_unimodular()?, u, diag, keep })
    }

    fn group(&self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(self.keep.iter().map(|&i| self.diag[i]).collect())
    }
}

/// Build the poset of sublattices of ℤⁿ with index ≤ max_index, ordered by
/// strict inclusion, with explicit connecting surjections between quotient
/// groups. Every edge is verified to be well defined and surjective, and
/// edge composition is verified on all two-step chains.
pub fn profinite_tower(n: usize, max_index: i64) -> Result<ProfiniteTower> {
    let sublattices = enumerate_sublattices(n, max_index);
    let mut nodes = Vec::new();
    let mut coords = Vec::new();
    for m in &sublattices {
        let group = QuotientGroup::new(m)?;
        nodes.push(TowerNode {
            m: m.clone(),
            index: group.index(),
            invariant_factors: group.invariant_factors().to_vec(),
        });
        coords.push(NodeCoords::new(m)?);
    }
    let mut edges = Vec::new();
    let mut edge_lookup: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (a, ma) in sublattices.iter().enumerate() {
        for (b, mb) in sublattices.iter().enumerate() {
            if a == b || !mb.contains_lattice(ma) {
                continue;
            }
            // Γ_a ⊆ Γ_b strictly: surjection ℤⁿ/Γ_a → ℤⁿ/Γ_b. The identity
            // on ℤⁿ reads as U_b·U_a⁻¹ between SNF coordinates.
            let full = coords[b].u.mul(&coords[a].u_inv);
            let mut map = IntMatrix::zeros(coords[b].keep.len(), coords[a].keep.len());
            for (bi, &ib) in coords[b].keep.iter().enumerate() {
                for (ai, &ia) in coords[a].keep.iter().enumerate() {
                    map[(bi, ai)] = full[(ib, ia)].rem_euclid(coords[b].diag[ib]);
                }
            }
            // Well defined: source relations die in the target.
            for (ai, &ia) in coords[a].keep.iter().enumerate() {
                for (bi, &ib) in coords[b].keep.iter().enumerate() {
                    if (map[(bi, ai)] * coords[a].diag[ia]) % coords[b].diag[ib] != 0 {
                        return Err(Error::Invalid("connecting map not well defined".into()));
                    }
                }
            }
            // Surjective: the image of all source elements is the whole
            // target group.
            let ga = coords[a].group()?;
            let gb = coords[b].group()?;
            let mut image = std::collections::BTreeSet::new();
            for e in ga.elements() {
                image.insert(gb.reduce(&map.mul_vec(&e)));
            }
            if image.len() as i64 != gb.order() {
                return Err(Error::Invalid("connecting map not surjective".into()));
            }
            edge_lookup.insert((a, b), edges.len());
            edges.push(TowerEdge { from: a, to: b, map });
        }
    }
    // Composition consistency on two-step chains a → b → c.
    for (&(a, b), &eab) in &edge_lookup {
        for (&(b2, c), &ebc) in &edge_lookup {
            if b != b2 {
                continue;
            }
            let eac = edge_lookup
                .get(&(a, c))
                .ok_or_else(|| Error::Invalid("inclusion chain missing its composite edge".into()))?;
            let ga = coords[a].group()?;
            let gc = coords[c].group()?;
            for e in ga.elements() {
                let via_b = gc.reduce(&edges[ebc].map.mul_vec(&coords[b].group()?.reduce(&edges[eab].map.mul_vec(&e))));
                let direct = gc.reduce(&edges[*eac].map.mul_vec(&e));
                if via_b != direct {
                    return Err(Error::Invalid("edge composition inconsistent".into()));
                }
            }
        }
    }
    Ok(ProfiniteTower { nodes, edges })
}

/// Result of the freeness test for a character-support subgroup N ⊆ Ĝ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreenessReport {
    pub free: bool,
    /// Elements of G annihilated by every character in N.
    pub kernel: Vec<Vec<i64>>,
    pub kernel_invariant_factors: Vec<i64>,
    pub subgroup_order: i64,
    pub group_order: i64,
}

/// Decide freeness of an action from the subgroup N ⊆ Ĝ of characters whose
/// isotypic components contain unitaries: the action is free iff N is all
/// of Ĝ, iff the annihilator of N in G is trivial.
pub fn check_freeness_ergodic(
    character_support: &[Vec<i64>],
    g: &FiniteAbelianGroup,
) -> Result<FreenessReport> {
    let n = g.validate_subgroup(character_support)?;
    let kernel = g.annihilator(&n);
    let kernel_invariant_factors = g.subgroup_invariant_factors(&kernel)?;
    let free = kernel.len() == 1;
    debug_assert_eq!(free, n.len() as i64 == g.order());
    Ok(FreenessReport {
        free,
        kernel,
        kernel_invariant_factors,
        subgroup_order: n.len() as i64,
        group_order: g.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::big_rat;

    fn std2() -> ThetaMatrix {
        ThetaMatrix::standard_2d()
    }

    fn poly(s: &str) -> RatPoly {
        s.parse().unwrap()
    }

    #[test]
    fn theta_prime_examples() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(tp.entry(0, 1), &poly("t/2"));
        let id = IntMatrix::identity(2);
        let tp = solve_theta_prime(&theta, &id, &IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(&tp, &theta);
        let k = IntMatrix::mat2(0, 1, -1, 0);
        let tp = solve_theta_prime(&theta, &m, &k).unwrap();
        assert_eq!(tp.entry(0, 1), &poly("(t + 1)/2"));
    }

    #[test]
    fn theta_prime_rejects_bad_inputs() {
        let theta = std2();
        assert!(matches!(
            solve_theta_prime(&theta, &IntMatrix::mat2(1, 0, 0, 0), &IntMatrix::zeros(2, 2)),
            Err(Error::SingularMatrix)
        ));
        assert!(matches!(
            solve_theta_prime(&theta, &IntMatrix::identity(2), &IntMatrix::mat2(0, 1, 1, 0)),
            Err(Error::NotSkew)
        ));
    }

    #[test]
    fn correction_enumeration() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let one = enumerate_theta_corrections(&theta, &m, 0).unwrap();
        assert_eq!(one.len(), 1);
        let three = enumerate_theta_corrections(&theta, &m, 1).unwrap();
        let vals: Vec<&RatPoly> = three.iter().map(|(_, tp)| tp.entry(0, 1)).collect();
        assert_eq!(vals, vec![&poly("(t - 1)/2"), &poly("t/2"), &poly("(t + 1)/2")]);
        // Integer shifts of θ itself are distinct rows, not deduplicated.
        let id_shifts = enumerate_theta_corrections(&theta, &IntMatrix::identity(2), 1).unwrap();
        assert_eq!(id_shifts.len(), 3);
    }

    #[test]
    fn build_embeds_generators() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
        let sys = build_connected_covering(&theta, &m, &tp).unwrap();
        assert_eq!(sys.embedding[0].to_string(), "U(2,0)");
        assert_eq!(sys.embedding[1].to_string(), "U(0,1)");
        // Commutation of the embedded generators carries phase e(t).
        let lhs = sys.embedding[0].mul(&sys.embedding[1]).unwrap();
        let rhs = sys.embedding[1].mul(&sys.embedding[0]).unwrap();
        assert_eq!(lhs, rhs.scale(&Scalar::phase("t".parse().unwrap())));
        assert_eq!(sys.spec.k, IntMatrix::zeros(2, 2));
    }

    #[test]
    fn build_rejects_inconsistent_theta_prime() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let bad = ThetaMatrix::two_d(poly("t/3"));
        assert!(matches!(
            build_connected_covering(&theta, &m, &bad),
            Err(Error::RelationViolated { .. })
        ));
    }

    #[test]
    fn gauge_params_for_c2xc2() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 2);
        let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
        assert_eq!(tp.entry(0, 1), &poly("t/4"));
        let sys = build_connected_covering(&theta, &m, &tp).unwrap();
        assert_eq!(sys.group.invariant_factors(), &[2, 2]);
        let params: Vec<Vec<BigRational>> = sys.gauge_params.clone();
        let expected: Vec<Vec<BigRational>> = vec![
            vec![big_rat(0, 1), big_rat(0, 1)],
            vec![big_rat(0, 1), big_rat(1, 2)],
            vec![big_rat(1, 2), big_rat(0, 1)],
            vec![big_rat(1, 2), big_rat(1, 2)],
        ];
        assert_eq!(params, expected);
    }

    #[test]
    fn check_passes_on_valid_system() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
        let sys = build_connected_covering(&theta, &m, &tp).unwrap();
        let report = check_connected_covering(&sys, 4);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.characters_total, 2);
        // Trivial covering.
        let id = IntMatrix::identity(2);
        let sys = build_connected_covering(&theta, &id, &theta).unwrap();
        let report = check_connected_covering(&sys, 2);
        assert!(report.all_passed());
        assert_eq!(report.characters_total, 1);
    }

    #[test]
    fn check_flags_corrupted_system() {
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let bad = ThetaMatrix::two_d(poly("t/3"));
        let sys = assemble_unchecked(CoveringSpec {
            theta: theta.clone(),
            m: m.clone(),
            k: IntMatrix::zeros(2, 2),
            theta_prime: bad,
        })
        .unwrap();
        let report = check_connected_covering(&sys, 3);
        assert!(!report.relations_embed);
        assert!(!report.all_passed());
    }

    #[test]
    fn fixed_support_drift() {
        // A non-diagonal sublattice: fixed support must follow Mᵀℤ².
        let theta = std2();
        let m = IntMatrix::mat2(2, 0, 1, 1);
        let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
        let sys = build_connected_covering(&theta, &m, &tp).unwrap();
        let report = check_connected_covering(&sys, 4);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn classification_row_counts() {
        let theta = std2();
        let rows = classify_coverings(&theta, 2, 0, 3).unwrap();
        assert_eq!(rows.len(), 4);
        let rows = classify_coverings(&theta, 4, 0, 3).unwrap();
        assert_eq!(rows.len(), 15);
        assert!(rows.iter().all(|r| r.report.all_passed()));
        // Index-1 row is the trivial covering.
        assert_eq!(rows[0].index, 1);
        assert!(rows[0].invariant_factors.is_empty());
        // With a correction bound, each sublattice contributes one row per
        // distinct correction.
        let rows = classify_coverings(&theta, 1, 1, 2).unwrap();
        assert_eq!(rows.len(), 3);
    }

    #[test]
    fn tower_small_cases() {
        let tower = profinite_tower(1, 4).unwrap();
        assert_eq!(tower.nodes.len(), 4);
        let mut arrows: Vec<(i64, i64)> = tower
            .edges
            .iter()
            .map(|e| (tower.nodes[e.from].index, tower.nodes[e.to].index))
            .collect();
        arrows.sort();
        assert_eq!(arrows, vec![(2, 1), (3, 1), (4, 1), (4, 2)]);

        let tower = profinite_tower(2, 2).unwrap();
        assert_eq!(tower.nodes.len(), 4);
        // Bottom node ℤ² receives one edge from each index-2 lattice.
        assert_eq!(tower.edges.len(), 3);
        assert!(tower.edges.iter().all(|e| tower.nodes[e.to].index == 1));

        let tower = profinite_tower(2, 1).unwrap();
        assert_eq!(tower.nodes.len(), 1);
        assert!(tower.edges.is_empty());
    }

    #[test]
    fn tower_maps_are_reduction_mod_divisor() {
        // In the n=1 chain the 4 → 2 connecting map must be x mod 2.
        let tower = profinite_tower(1, 4).unwrap();
        let edge = tower
            .edges
            .iter()
            .find(|e| tower.nodes[e.from].index == 4 && tower.nodes[e.to].index == 2)
            .unwrap();
        assert_eq!(edge.map.rows(), 1);
        assert_eq!(edge.map.cols(), 1);
        assert_eq!(edge.map[(0, 0)].rem_euclid(2), 1);
    }

    #[test]
    fn freeness_cases() {
        let g = FiniteAbelianGroup::new(vec![2, 2]).unwrap();
        let full = g.elements();
        let report = check_freeness_ergodic(&full, &g).unwrap();
        assert!(report.free);
        assert_eq!(report.kernel, vec![vec![0, 0]]);
        assert!(report.kernel_invariant_factors.is_empty());

        let factor = g.subgroup_generated(&[vec![1, 0]]);
        let report = check_freeness_ergodic(&factor, &g).unwrap();
        assert!(!report.free);
        assert_eq!(report.kernel_invariant_factors, vec![2]);
        assert_eq!(report.kernel, vec![vec![0, 0], vec![0, 1]]);

        let trivial = FiniteAbelianGroup::trivial();
        let report = check_freeness_ergodic(&[vec![]], &trivial).unwrap();
        assert!(report.free);

        assert!(matches!(
            check_freeness_ergodic(&[vec![1, 0]], &g),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn all_small_coverings_verify() {
        // Every HNF sublattice of index ≤ 6 with K = 0 builds and passes.
        let theta = std2();
        for m in enumerate_sublattices(2, 6) {
            let tp = solve_theta_prime(&theta, &m, &IntMatrix::zeros(2, 2)).unwrap();
            let sys = build_connected_covering(&theta, &m, &tp).unwrap();
            let report = check_connected_covering(&sys, 4);
            assert!(report.all_passed(), "failed at {m:?}: {report:?}");
        }
    }
}
