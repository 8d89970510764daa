//! Finite abelian groups in invariant-factor coordinates, their character
//! pairings, quotients, and central extensions by symmetric 2-cocycles.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::phase::PhaseExponent;
use crate::ratpoly::rat_mod1;

/// ⊕ᵢ ℤ/dᵢ with d₁ | d₂ | … and every dᵢ ≥ 2 (the trivial group is the
/// empty sum). Elements are coordinate tuples; the dual group is identified
/// with the same coordinate space via the pairing
/// `⟨χ, g⟩ = Σᵢ χᵢ gᵢ / dᵢ mod 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<i64>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<i64>) -> Result<Self> {
        let factors: Vec<i64> = factors.into_iter().filter(|&d| d != 1).collect();
        for &d in &factors {
            if d < 1 {
                return Err(Error::Invalid(format!("invalid invariant factor {d}")));
            }
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Invalid(format!(
                    "invariant factors must form a divisibility chain, got {} ∤ {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    pub fn cyclic(d: i64) -> Self {
        Self::new(vec![d]).expect("cyclic group order")
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> i64 {
        self.factors.iter().product()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.factors.len()]
    }

    pub fn is_zero(&self, g: &[i64]) -> bool {
        g.iter().all(|&x| x == 0)
    }

    pub fn reduce(&self, g: &[i64]) -> Vec<i64> {
        assert_eq!(g.len(), self.factors.len());
        g.iter().zip(&self.factors).map(|(&x, &d)| x.rem_euclid(d)).collect()
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        assert_eq!(a.len(), b.len());
        self.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        self.reduce(&a.iter().map(|&x| -x).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        self.add(a, &self.neg(b))
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.factors {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in out {
                for x in 0..d {
                    let mut v = e.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    /// Position of an element in `elements()` order (mixed radix).
    pub fn element_index(&self, g: &[i64]) -> usize {
        let g = self.reduce(g);
        let mut idx = 0usize;
        for (x, &d) in g.iter().zip(&self.factors) {
            idx = idx * d as usize + *x as usize;
        }
        idx
    }

    /// Unit vectors, one per invariant factor.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        (0..self.factors.len())
            .map(|i| {
                let mut e = self.zero();
                e[i] = 1;
                e
            })
            .collect()
    }

    pub fn order_of(&self, g: &[i64]) -> i64 {
        let g = self.reduce(g);
        if self.is_zero(&g) {
            return 1;
        }
        let mut acc = g.clone();
        let mut k = 1;
        while !self.is_zero(&acc) {
            acc = self.add(&acc, &g);
            k += 1;
        }
        k
    }

    /// Duality pairing `⟨χ, g⟩ = Σᵢ χᵢ gᵢ / dᵢ` as a phase.
    pub fn pairing(&self, chi: &[i64], g: &[i64]) -> PhaseExponent {
        assert_eq!(chi.len(), self.factors.len());
        assert_eq!(g.len(), self.factors.len());
        let mut total = BigRational::zero();
        for ((&c, &x), &d) in chi.iter().zip(g).zip(&self.factors) {
            total += BigRational::new(BigInt::from(c * x), BigInt::from(d));
        }
        PhaseExponent::from_rational(rat_mod1(&total))
    }

    /// Validate that an explicit element list is a subgroup; returns it
    /// sorted and deduplicated.
    pub fn validate_subgroup(&self, elems: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let set: BTreeSet<Vec<i64>> = elems.iter().map(|e| self.reduce(e)).collect();
        if set.is_empty() {
            return Err(Error::NotSubgroup("empty element list".into()));
        }
        if !set.contains(&self.zero()) {
            return Err(Error::NotSubgroup("missing the identity".into()));
        }
        for a in &set {
            for b in &set {
                let s = self.add(a, b);
                if !set.contains(&s) {
                    return Err(Error::NotSubgroup(format!("not closed: {a:?} + {b:?} = {s:?}")));
                }
            }
        }
        Ok(set.into_iter().collect())
    }

    /// Subgroup generated by the given elements.
    pub fn subgroup_generated(&self, gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
        set.insert(self.zero());
        let mut queue: VecDeque<Vec<i64>> = set.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Annihilator of a subgroup under the duality pairing.
    pub fn annihilator(&self, subgroup: &[Vec<i64>]) -> Vec<Vec<i64>> {
        self.elements()
            .into_iter()
            .filter(|chi| subgroup.iter().all(|s| self.pairing(chi, s).is_trivial()))
            .collect()
    }

    /// Quotient by the subgroup generated by `gens`, with an explicit
    /// projection and section.
    pub fn quotient_by(&self, gens: &[Vec<i64>]) -> Result<QuotientMap> {
        QuotientMap::new(self, gens)
    }

    /// Invariant factors of a subgroup given by its element list.
    pub fn subgroup_invariant_factors(&self, elems: &[Vec<i64>]) -> Result<Vec<i64>> {
        let elems = self.validate_subgroup(elems)?;
        let r = self.factors.len();
        if r == 0 {
            return Ok(vec![]);
        }
        // Lift: the subgroup is L/Dℤʳ where L is spanned by the elements
        // together with D = diag(factors). With L = B·ℤʳ (Hermite basis),
        // the subgroup is ≅ ℤʳ/Cℤʳ for C = B⁻¹D.
        let mut cols: Vec<Vec<i64>> = elems.to_vec();
        for (i, &d) in self.factors.iter().enumerate() {
            let mut c = vec![0; r];
            c[i] = d;
            cols.push(c);
        }
        let wide = IntMatrix::from_rows(
            (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
        );
        let (d_wide, u, _) = wide.snf();
        // Hermite-like basis B of L from the SNF: L = U⁻¹·diag(d̃)·ℤʳ.
        let u_inv = u.inverse_unimodular()?;
        let mut diag = IntMatrix::zeros(r, r);
        for i in 0..r {
            diag[(i, i)] = d_wide[(i, i)];
        }
        let b = u_inv.mul(&diag);
        let dmat = {
            let mut m = IntMatrix::zeros(r, r);
            for (i, &d) in self.factors.iter().enumerate() {
                m[(i, i)] = d;
            }
            m
        };
        // C = B⁻¹·D, integer because Dℤʳ ⊆ L.
        let det_b = b.det();
        let aug = b.adjugate().mul(&dmat);
        let mut c = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                assert_eq!(aug[(i, j)] % det_b, 0, "subgroup lattice containment");
                c[(i, j)] = aug[(i, j)] / det_b;
            }
        }
        let (snf_c, _, _) = c.snf();
        Ok((0..r).map(|i| snf_c[(i, i)].abs()).filter(|&f| f > 1).collect())
    }
}

/// A quotient `G/⟨gens⟩` with explicit invariant-factor coordinates, a
/// projection, and a section (right inverse of the projection).
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    u: IntMatrix,
    u_inv: IntMatrix,
    full_diag: Vec<i64>,
    keep: Vec<usize>,
}

impl QuotientMap {
    fn new(source: &FiniteAbelianGroup, gens: &[Vec<i64>]) -> Result<Self> {
        let r = source.rank();
        if r == 0 {
            return Ok(QuotientMap {
                source: source.clone(),
                target: FiniteAbelianGroup::trivial(),
                u: IntMatrix::identity(0),
                u_inv: IntMatrix::identity(0),
                full_diag: vec![],
                keep: vec![],
            });
        }
        // Quotient lattice L = span(gens) + diag(d)ℤʳ; G/⟨gens⟩ ≅ ℤʳ/L.
        let mut cols: Vec<Vec<i64>> = gens.iter().map(|g| source.reduce(g)).collect();
        for (i, &d) in source.factors().iter().enumerate() {
            let mut c = vec![0; r];
            c[i] = d;
            cols.push(c);
        }
        let wide = IntMatrix::from_rows(
            (0..r).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
        );
        let (d, u, _) = wide.snf();
        let full_diag: Vec<i64> = (0..r).map(|i| d[(i, i)]).collect();
        assert!(full_diag.iter().all(|&x| x > 0), "quotient lattice has full rank");
        let keep: Vec<usize> = (0..r).filter(|&i| full_diag[i] > 1).collect();
        let target = FiniteAbelianGroup::new(keep.iter().map(|&i| full_diag[i]).collect())?;
        let u_inv = u.inverse_unimodular()?;
        Ok(QuotientMap { source: source.clone(), target, u, u_inv, full_diag, keep })
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn project(&self, g: &[i64]) -> Vec<i64> {
        let y = self.u.mul_vec(&self.source.reduce(g));
        self.keep
            .iter()
            .map(|&i| y[i].rem_euclid(self.full_diag[i]))
            .collect()
    }

    pub fn section(&self, q: &[i64]) -> Vec<i64> {
        assert_eq!(q.len(), self.keep.len());
        let mut y = vec![0i64; self.full_diag.len()];
        for (pos, &i) in self.keep.iter().enumerate() {
            y[i] = q[pos].rem_euclid(self.full_diag[i]);
        }
        self.source.reduce(&self.u_inv.mul_vec(&y))
    }
}

/// Central extension `E = N ×_ω H` of H by N along a symmetric normalized
/// 2-cocycle ω: H × H → N, with group law
/// `(n₁,h₁) + (n₂,h₂) = (n₁+n₂+ω(h₁,h₂), h₁+h₂)`.
///
/// Symmetry of ω makes E abelian.
#[derive(Clone, Debug)]
pub struct ExtensionGroup {
    n_group: FiniteAbelianGroup,
    h_group: FiniteAbelianGroup,
    omega: BTreeMap<(Vec<i64>, Vec<i64>), Vec<i64>>,
}

/// An element (n, h) of an extension group.
pub type ExtElem = (Vec<i64>, Vec<i64>);

impl ExtensionGroup {
    pub fn new<F>(n_group: FiniteAbelianGroup, h_group: FiniteAbelianGroup, omega: F) -> Result<Self>
    where
        F: Fn(&[i64], &[i64]) -> Vec<i64>,
    {
        let h_elems = h_group.elements();
        let mut table = BTreeMap::new();
        for h1 in &h_elems {
            for h2 in &h_elems {
                let w = n_group.reduce(&omega(h1, h2));
                table.insert((h1.clone(), h2.clone()), w);
            }
        }
        let ext = ExtensionGroup { n_group, h_group, omega: table };
        ext.validate()?;
        Ok(ext)
    }

    fn validate(&self) -> Result<()> {
        let h_elems = self.h_group.elements();
        let zero_h = self.h_group.zero();
        for h in &h_elems {
            if !self.n_group.is_zero(&self.omega[&(zero_h.clone(), h.clone())])
                || !self.n_group.is_zero(&self.omega[&(h.clone(), zero_h.clone())])
            {
                return Err(Error::NotCocycle("ω is not normalized (ω(0,·) ≠ 0)".into()));
            }
        }
        for h1 in &h_elems {
            for h2 in &h_elems {
                if self.omega[&(h1.clone(), h2.clone())] != self.omega[&(h2.clone(), h1.clone())] {
                    return Err(Error::NotCocycle(format!("ω not symmetric at ({h1:?},{h2:?})")));
                }
                for h3 in &h_elems {
                    // ω(h₁,h₂) + ω(h₁+h₂,h₃) = ω(h₂,h₃) + ω(h₁,h₂+h₃)
                    let lhs = self.n_group.add(
                        &self.omega[&(h1.clone(), h2.clone())],
                        &self.omega[&(self.h_group.add(h1, h2), h3.clone())],
                    );
                    let rhs = self.n_group.add(
                        &self.omega[&(h2.clone(), h3.clone())],
                        &self.omega[&(h1.clone(), self.h_group.add(h2, h3))],
                    );
                    if lhs != rhs {
                        return Err(Error::NotCocycle(format!(
                            "cocycle identity fails at ({h1:?},{h2:?},{h3:?})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n_group(&self) -> &FiniteAbelianGroup {
        &self.n_group
    }

    pub fn h_group(&self) -> &FiniteAbelianGroup {
        &self.h_group
    }

    pub fn omega(&self, h1: &[i64], h2: &[i64]) -> &Vec<i64> {
        &self.omega[&(self.h_group.reduce(h1), self.h_group.reduce(h2))]
    }

    pub fn order(&self) -> i64 {
        self.n_group.order() * self.h_group.order()
    }

    pub fn zero(&self) -> ExtElem {
        (self.n_group.zero(), self.h_group.zero())
    }

    pub fn is_zero(&self, e: &ExtElem) -> bool {
        self.n_group.is_zero(&e.0) && self.h_group.is_zero(&e.1)
    }

    pub fn elements(&self) -> Vec<ExtElem> {
        let mut out = Vec::new();
        for n in self.n_group.elements() {
            for h in self.h_group.elements() {
                out.push((n.clone(), h));
            }
        }
        out
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let w = self.omega(&a.1, &b.1);
        let n = self.n_group.add(&self.n_group.add(&a.0, &b.0), w);
        let h = self.h_group.add(&a.1, &b.1);
        (n, h)
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        let h = self.h_group.neg(&a.1);
        let w = self.omega(&a.1, &h).clone();
        let n = self.n_group.neg(&self.n_group.add(&a.0, &w));
        (n, h)
    }

    pub fn order_of(&self, a: &ExtElem) -> i64 {
        if self.is_zero(a) {
            return 1;
        }
        let mut acc = a.clone();
        let mut k = 1;
        while !self.is_zero(&acc) {
            acc = self.add(&acc, a);
            k += 1;
        }
        k
    }

    pub fn max_element_order(&self) -> i64 {
        self.elements().iter().map(|e| self.order_of(e)).max().unwrap_or(1)
    }

    /// All characters E → ℚ/ℤ, enumerated by brute force: candidate values
    /// on the canonical generators, extended over E by breadth-first
    /// search with a consistency check. The count is asserted to be |E|.
    pub fn characters(&self) -> Vec<ExtCharacter> {
        let mut gens: Vec<ExtElem> = Vec::new();
        for g in self.n_group.generators() {
            gens.push((g, self.h_group.zero()));
        }
        for g in self.h_group.generators() {
            gens.push((self.n_group.zero(), g));
        }
        let orders: Vec<i64> = gens.iter().map(|g| self.order_of(g)).collect();
        let elements = self.elements();
        let mut out = Vec::new();
        let mut assignment = vec![0i64; gens.len()];
        loop {
            if let Some(ch) = self.try_character(&gens, &orders, &assignment, &elements) {
                out.push(ch);
            }
            // Odometer over value numerators 0..order per generator.
            let mut i = 0;
            while i < gens.len() {
                assignment[i] += 1;
                if assignment[i] < orders[i] {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
            if gens.is_empty() || i == gens.len() {
                break;
            }
        }
        assert_eq!(out.len() as i64, self.order(), "character count equals group order");
        out.sort_by(|a, b| a.values.cmp(&b.values));
        out
    }

    fn try_character(
        &self,
        gens: &[ExtElem],
        orders: &[i64],
        assignment: &[i64],
        elements: &[ExtElem],
    ) -> Option<ExtCharacter> {
        let vals: Vec<BigRational> = assignment
            .iter()
            .zip(orders)
            .map(|(&k, &m)| BigRational::new(BigInt::from(k), BigInt::from(m)))
            .collect();
        let mut known: BTreeMap<ExtElem, BigRational> = BTreeMap::new();
        known.insert(self.zero(), BigRational::zero());
        let mut queue = VecDeque::new();
        queue.push_back(self.zero());
        while let Some(x) = queue.pop_front() {
            let vx = known[&x].clone();
            for (g, vg) in gens.iter().zip(&vals) {
                let y = self.add(&x, g);
                let vy = rat_mod1(&(&vx + vg));
                match known.get(&y) {
                    Some(existing) => {
                        if existing != &vy {
                            return None;
                        }
                    }
                    None => {
                        known.insert(y.clone(), vy);
                        queue.push_back(y);
                    }
                }
            }
        }
        debug_assert_eq!(known.len(), elements.len(), "generators generate the extension");
        Some(ExtCharacter { values: known })
    }
}

/// A character of an [`ExtensionGroup`], tabulated on every element; values
/// are rationals in [0,1) representing exponents of e(·).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtCharacter {
    values: BTreeMap<ExtElem, BigRational>,
}

impl ExtCharacter {
    pub fn eval(&self, e: &ExtElem) -> &BigRational {
        &self.values[e]
    }

    pub fn phase(&self, e: &ExtElem) -> PhaseExponent {
        PhaseExponent::from_rational(self.eval(e).clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &ExtCharacter) -> ExtCharacter {
        assert_eq!(self.values.len(), other.values.len());
        ExtCharacter {
            values: self
                .values
                .iter()
                .map(|(e, v)| (e.clone(), rat_mod1(&(v + other.eval(e)))))
                .collect(),
        }
    }

    /// Restriction to N as dual coordinates: χ((eᵢ,0)) = cᵢ/dᵢ.
    pub fn restrict_to_n(&self, ext: &ExtensionGroup) -> Vec<i64> {
        let n = ext.n_group();
        n.generators()
            .iter()
            .zip(n.factors())
            .map(|(g, &d)| {
                let v = self.eval(&(g.clone(), ext.h_group().zero()));
                let scaled = v * BigRational::from_integer(BigInt::from(d));
                assert!(scaled.is_integer(), "restriction lands in the dual of N");
                let c: BigInt = scaled.to_integer();
                let c: i64 = i64::try_from(&c).expect("small dual coordinate");
                c.rem_euclid(d)
            })
            .collect()
    }
}
