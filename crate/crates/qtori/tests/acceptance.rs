//! End-to-end acceptance suite. Each test covers one headline capability,
//! checks it against an independent oracle where one exists, and prints a
//! single PASS line (visible with `--nocapture`). Everything here is exact
//! arithmetic; no tolerances anywhere.

mod common;

use std::collections::BTreeSet;
use std::str::FromStr;
use std::time::Instant;

use num::rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{ordered_monomial, rat, swap_oracle_product};
use qtori::abgroup::FiniteAbelianGroup;
use qtori::covering::{
    build_connected_covering, check_connected_covering, check_freeness_ergodic,
    classify_coverings, enumerate_theta_corrections, solve_theta_prime,
};
use qtori::error::Error;
use qtori::lattice::IntMatrix;
use qtori::phase::{PhaseExponent, Scalar};
use qtori::ratpoly::RatPoly;
use qtori::smooth::cocycle::verify_cocycle_identity;
use qtori::smooth::{
    build_smooth_covering, compute_cocycle, hom_image, inflate_by_extension, out_inv, out_mul,
    solve_associativity, GaugeVec, GradedSystem, Lift, OutSmoothElement, TorusPoint,
};
use qtori::torus::{ThetaMatrix, TorusElement};

fn poly(src: &str) -> RatPoly {
    RatPoly::from_str(src).expect("test polynomial parses")
}

/// Random rational in [-2, 2] with denominator at most 3.
fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let den = rng.random_range(1..=3i64);
    let num = rng.random_range(-2 * den..=2 * den);
    rat(num, den)
}

fn random_skew_theta(rng: &mut ChaCha8Rng, n: usize) -> ThetaMatrix {
    let mut upper = Vec::new();
    for k in 0..n {
        for l in (k + 1)..n {
            let c = small_rational(rng);
            let q = small_rational(rng);
            let entry = &RatPoly::term(c, 1) + &RatPoly::constant(q);
            upper.push(((k, l), entry));
        }
    }
    ThetaMatrix::from_upper(n, &upper).expect("skew by construction")
}

#[test]
fn criterion_1_twisted_product_matches_swap_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5157_4f52);
    for trial in 0..1000 {
        let n = 2 + (trial % 2);
        let theta = random_skew_theta(&mut rng, n);
        let lam: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
        let mu: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();

        let lhs = ordered_monomial(&theta, &lam)
            .mul(&ordered_monomial(&theta, &mu))
            .expect("same theta");
        let rhs = swap_oracle_product(&theta, &lam, &mu);
        assert_eq!(
            lhs, rhs,
            "trial {trial}: product disagrees with swap oracle for lam={lam:?} mu={mu:?}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 took {elapsed:?}, budget is 5s");
    println!("criterion 1: PASS - 1000 random monomial products match the swap oracle ({elapsed:?})");
}

/// All Hermite-normal-form sublattice matrices [[a, b], [0, d]] with
/// 0 <= b < d and a*d <= max_index. Their count per index m is the divisor
/// sum sigma_1(m), which double-checks the enumeration itself.
fn hnf_matrices(max_index: i64) -> Vec<IntMatrix> {
    let mut out = Vec::new();
    for a in 1..=max_index {
        for d in 1..=max_index / a {
            for b in 0..d {
                out.push(IntMatrix::mat2(a, b, 0, d));
            }
        }
    }
    out
}

fn sigma1(m: i64) -> i64 {
    (1..=m).filter(|d| m % d == 0).sum()
}

#[test]
fn criterion_2_all_small_index_coverings_verify() {
    let start = Instant::now();
    let theta = ThetaMatrix::standard_2d();
    let mats = hnf_matrices(6);
    let expected: i64 = (1..=6).map(sigma1).sum();
    assert_eq!(mats.len() as i64, expected, "HNF enumeration disagrees with divisor sums");
    assert_eq!(mats.len(), 33);

    let zero_k = IntMatrix::zeros(2, 2);
    let failures: Vec<String> = mats
        .par_iter()
        .filter_map(|m| {
            let tp = solve_theta_prime(&theta, m, &zero_k).expect("relation is solvable for K=0");
            let sys = build_connected_covering(&theta, m, &tp).expect("covering assembles");
            let report = check_connected_covering(&sys, 4);
            if report.all_passed() {
                None
            } else {
                Some(format!("M={m:?}: {report:?}"))
            }
        })
        .collect();
    assert!(failures.is_empty(), "coverings failed verification:\n{}", failures.join("\n"));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "criterion 2 took {elapsed:?}, budget is 30s");
    println!("criterion 2: PASS - all 33 sublattice coverings of index <= 6 verify ({elapsed:?})");
}

#[test]
fn criterion_3_theta_corrections_for_diag_2_1() {
    let theta = ThetaMatrix::standard_2d();
    let m = IntMatrix::mat2(2, 0, 0, 1);
    let corrections = enumerate_theta_corrections(&theta, &m, 1).expect("enumeration succeeds");

    let mut seen: Vec<String> =
        corrections.iter().map(|(_, tp)| tp.entry(0, 1).to_string()).collect();
    seen.sort();
    let mut expected: Vec<String> = ["(t-1)/2", "t/2", "(t+1)/2"]
        .iter()
        .map(|s| poly(s).to_string())
        .collect();
    expected.sort();
    assert_eq!(seen, expected, "correction set is not exactly {{(t-1)/2, t/2, (t+1)/2}}");

    // Independent integrality check: M theta' M^T - theta must be an integer
    // matrix, entry by entry, and must equal the returned K.
    for (k, tp) in &corrections {
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = RatPoly::zero();
                for a in 0..2 {
                    for b in 0..2 {
                        let scaled = tp.entry(a, b).scale(&rat(m[(i, a)] * m[(j, b)], 1));
                        acc = &acc + &scaled;
                    }
                }
                let diff = &acc - theta.entry(i, j);
                assert!(
                    diff.is_integer(),
                    "M theta' M^T - theta has non-integer entry ({i},{j}) = {diff} for theta' = {}",
                    tp.entry(0, 1)
                );
                assert_eq!(
                    diff.constant_part(),
                    rat(k[(i, j)], 1),
                    "returned K disagrees with M theta' M^T - theta at ({i},{j})"
                );
            }
        }
    }
    println!("criterion 3: PASS - corrections for M=diag(2,1) are exactly {{(t-1)/2, t/2, (t+1)/2}}");
}

#[test]
fn criterion_4_classification_count_matches_sublattice_oracle() {
    let theta = ThetaMatrix::standard_2d();
    let rows = classify_coverings(&theta, 4, 0, 3).expect("classification succeeds");

    let oracle = hnf_matrices(4);
    let expected: i64 = (1..=4).map(sigma1).sum();
    assert_eq!(oracle.len() as i64, expected);
    assert_eq!(rows.len(), 15, "expected 15 classification rows for max index 4");
    assert_eq!(rows.len(), oracle.len(), "row count disagrees with HNF oracle");

    let mut got: Vec<i64> = rows.iter().map(|r| r.index).collect();
    got.sort();
    let mut want: Vec<i64> = oracle.iter().map(|m| m.det().abs()).collect();
    want.sort();
    assert_eq!(got, want, "index multiset disagrees with the sublattice oracle");

    for row in &rows {
        assert!(row.report.all_passed(), "row M={:?} failed verification: {:?}", row.m, row.report);
    }
    println!("criterion 4: PASS - classification has 15 rows, matching the sublattice oracle");
}

fn image(w: [[i64; 4]; 2], m: [i64; 4]) -> OutSmoothElement {
    let pts = vec![
        TorusPoint::new(rat(w[0][0], w[0][1]), rat(w[0][2], w[0][3])),
        TorusPoint::new(rat(w[1][0], w[1][1]), rat(w[1][2], w[1][3])),
    ];
    OutSmoothElement::new(pts, IntMatrix::mat2(m[0], m[1], m[2], m[3])).expect("det-1 image")
}

const ZW: [[i64; 4]; 2] = [[0, 1, 0, 1], [0, 1, 0, 1]];
const ID2: [i64; 4] = [1, 0, 0, 1];
const NEG2: [i64; 4] = [-1, 0, 0, -1];
// Order-3 element of SL2(Z): A^3 = I and I + A + A^2 = 0.
const ORD3: [i64; 4] = [0, 1, -1, -1];

fn smooth_samples() -> Vec<(&'static str, Vec<i64>, Vec<OutSmoothElement>)> {
    vec![
        // C2: rational and theta-rational half shifts, a pure flip, and
        // flip-shift mixtures (the 1/4 shift has order 2 only because the
        // flip negates it).
        ("C2 half shift", vec![2], vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2)]),
        ("C2 theta/2 shift", vec![2], vec![image([[0, 1, 1, 2], [0, 1, 0, 1]], ID2)]),
        ("C2 theta/2 second coord", vec![2], vec![image([[0, 1, 0, 1], [0, 1, 1, 2]], ID2)]),
        ("C2 flip", vec![2], vec![image(ZW, NEG2)]),
        ("C2 flip with half shift", vec![2], vec![image([[1, 2, 0, 1], [0, 1, 1, 2]], NEG2)]),
        ("C2 flip with quarter shift", vec![2], vec![image([[1, 4, 0, 1], [0, 1, 0, 1]], NEG2)]),
        // C3: the order-3 matrix with and without shifts, plus pure
        // third-shifts in each coordinate and gauge class.
        ("C3 matrix", vec![3], vec![image(ZW, ORD3)]),
        ("C3 third shift", vec![3], vec![image([[1, 3, 0, 1], [0, 1, 0, 1]], ID2)]),
        ("C3 third shift second coord", vec![3], vec![image([[0, 1, 0, 1], [1, 3, 0, 1]], ID2)]),
        ("C3 theta/3 shift", vec![3], vec![image([[0, 1, 1, 3], [0, 1, 0, 1]], ID2)]),
        ("C3 theta/3 second coord", vec![3], vec![image([[0, 1, 0, 1], [0, 1, 1, 3]], ID2)]),
        ("C3 matrix with shift", vec![3], vec![image([[1, 3, 0, 1], [2, 3, 0, 1]], ORD3)]),
        // C2 x C2: mixed gauge classes, a flip factor, a non-injective
        // homomorphism, and two commuting flip-shifts.
        (
            "C2xC2 half shifts",
            vec![2, 2],
            vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2), image([[0, 1, 0, 1], [1, 2, 0, 1]], ID2)],
        ),
        (
            "C2xC2 rational and theta-rational",
            vec![2, 2],
            vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2), image([[0, 1, 1, 2], [0, 1, 0, 1]], ID2)],
        ),
        (
            "C2xC2 theta-rational pair",
            vec![2, 2],
            vec![image([[0, 1, 1, 2], [0, 1, 0, 1]], ID2), image([[0, 1, 0, 1], [0, 1, 1, 2]], ID2)],
        ),
        (
            "C2xC2 flip and shift",
            vec![2, 2],
            vec![image(ZW, NEG2), image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2)],
        ),
        (
            "C2xC2 non-injective",
            vec![2, 2],
            vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2), image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2)],
        ),
        (
            "C2xC2 two flip shifts",
            vec![2, 2],
            vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], NEG2), image([[0, 1, 0, 1], [1, 2, 0, 1]], NEG2)],
        ),
    ]
}

fn check_smooth_system(name: &str, sys: &GradedSystem, images: &[OutSmoothElement]) {
    let report = sys.verify().expect("verification runs");
    assert!(report.all_passed(), "{name}: verification failed: {report:?}");

    let elements = sys.group().elements();

    // Associativity of the graded product on all unitary triples.
    for c1 in &elements {
        let e1 = sys.unitary(c1);
        for c2 in &elements {
            let e2 = sys.unitary(c2);
            let left = sys.mul(&e1, &e2).expect("graded product");
            for c3 in &elements {
                let e3 = sys.unitary(c3);
                let lhs = sys.mul(&left, &e3).expect("graded product");
                let rhs = sys.mul(&e1, &sys.mul(&e2, &e3).expect("graded product")).expect("graded product");
                assert_eq!(lhs, rhs, "{name}: associativity fails at ({c1:?}, {c2:?}, {c3:?})");
            }
        }
    }

    // Every canonical unitary is unitary in its component.
    let one = sys.one();
    for chi in &elements {
        let e = sys.unitary(chi);
        let e_star = sys.adjoint(&e).expect("adjoint");
        assert_eq!(sys.mul(&e, &e_star).expect("product"), one, "{name}: e e* != 1 at {chi:?}");
        assert_eq!(sys.mul(&e_star, &e).expect("product"), one, "{name}: e* e != 1 at {chi:?}");
    }

    // Fixed algebra of the dual action is exactly the trivial component:
    // averaging a generic element leaves its unit part, verbatim.
    let theta = sys.theta();
    let mut generic = sys.zero();
    for (i, chi) in elements.iter().enumerate() {
        let coeff = TorusElement::monomial(
            theta,
            vec![i as i64 - 1, 1 - (i as i64 % 3)],
            Scalar::from_int(i as i64 + 2),
        );
        generic = sys.add(&generic, &sys.component(chi, coeff)).expect("graded sum");
    }
    let averaged = sys.action_average(&generic).expect("average");
    assert_eq!(averaged, sys.unit_part(&generic), "{name}: fixed algebra is not the unit component");

    // The spectral invariant returns the defining homomorphism.
    for chi in &elements {
        let expected = hom_image(images, chi);
        let via_phi = sys.phi(chi).expect("phi");
        let via_picard = sys.picard_of(chi).expect("picard");
        assert_eq!(via_phi, expected, "{name}: phi({chi:?}) disagrees with the generator images");
        assert_eq!(via_picard, expected, "{name}: picard_of({chi:?}) != phi({chi:?})");
    }
}

#[test]
fn criterion_5_smooth_coverings_for_sample_homomorphisms() {
    let start = Instant::now();
    let theta = ThetaMatrix::standard_2d();
    let samples = smooth_samples();
    assert!(samples.iter().filter(|(_, f, _)| f == &vec![2]).count() >= 5);
    assert!(samples.iter().filter(|(_, f, _)| f == &vec![3]).count() >= 5);
    assert!(samples.iter().filter(|(_, f, _)| f == &vec![2, 2]).count() >= 5);

    for (name, factors, images) in &samples {
        let group = FiniteAbelianGroup::new(factors.clone()).expect("group");
        let sys = build_smooth_covering(&theta, &group, images)
            .unwrap_or_else(|e| panic!("{name}: build failed: {e}"));
        check_smooth_system(name, &sys, images);
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 5 took {elapsed:?}, budget is 60s");
    println!(
        "criterion 5: PASS - {} sample homomorphisms build verified smooth coverings ({elapsed:?})",
        samples.len()
    );
}

/// Subgroup generated by a list of elements, by closure under addition.
fn subgroup_closure(g: &FiniteAbelianGroup, gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    out.insert(g.zero());
    loop {
        let mut grew = false;
        let snapshot: Vec<Vec<i64>> = out.iter().cloned().collect();
        for x in &snapshot {
            for gen in gens {
                if out.insert(g.add(x, gen)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    out
}

#[test]
fn criterion_6_freeness_kernels_over_c2xc2() {
    let g = FiniteAbelianGroup::new(vec![2, 2]).expect("group");
    let supports: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![0, 0]],
        vec![vec![1, 0]],
        vec![vec![0, 1]],
        vec![vec![1, 1]],
        vec![vec![1, 0], vec![0, 1]],
    ];

    for support in &supports {
        let subgroup = subgroup_closure(&g, support);
        let elems: Vec<Vec<i64>> = subgroup.iter().cloned().collect();
        let report = check_freeness_ergodic(&elems, &g).expect("freeness check runs");

        // Brute-force annihilator: elements pairing integrally with all of N.
        let annihilator: BTreeSet<Vec<i64>> = g
            .elements()
            .into_iter()
            .filter(|x| {
                subgroup.iter().all(|n| {
                    let mut sum = rat(0, 1);
                    for ((ni, xi), fi) in n.iter().zip(x).zip(g.factors()) {
                        sum += rat(ni * xi, *fi);
                    }
                    sum.is_integer()
                })
            })
            .collect();

        let kernel: BTreeSet<Vec<i64>> = report.kernel.iter().cloned().collect();
        assert_eq!(kernel, annihilator, "kernel is not the annihilator of N = {subgroup:?}");
        assert_eq!(
            report.free,
            subgroup.len() as i64 == g.order(),
            "freeness must hold exactly when the support generates the whole dual"
        );
    }
    println!("criterion 6: PASS - all 5 subgroups of C2xC2 report annihilator kernels");
}

#[test]
fn criterion_7_inflation_components_are_tensor_products() {
    let theta = ThetaMatrix::standard_2d();
    let n_group = FiniteAbelianGroup::new(vec![2]).expect("group");
    let images = vec![image([[0, 1, 1, 2], [0, 1, 0, 1]], ID2)];
    let base = build_smooth_covering(&theta, &n_group, &images).expect("base covering");

    let cocycles: Vec<(&str, Box<dyn Fn(&[i64], &[i64]) -> Vec<i64>>)> = vec![
        ("trivial omega", Box::new(|_: &[i64], _: &[i64]| vec![0])),
        // omega(h1, h2) = h1 h2 mod 2 extends C2 by C2 into Z4.
        ("nontrivial omega", Box::new(|h1: &[i64], h2: &[i64]| vec![(h1[0] * h2[0]).rem_euclid(2)])),
    ];

    for (label, omega) in cocycles {
        let h_group = FiniteAbelianGroup::new(vec![2]).expect("group");
        let infl = inflate_by_extension(base.clone(), h_group, omega).expect("inflation");
        let n_zero = infl.ext().n_group().zero();
        let h_elements = infl.ext().h_group().elements();

        for chi in infl.ext().characters() {
            let chi_n = chi.restrict_to_n(infl.ext());

            // A'(chi) = chi_H tensor A(chi_N): the eigenfunction built from
            // any x in A(chi_N) takes the value chi(0, h) * x at h, with the
            // same support and coefficients.
            let reps = vec![
                base.unitary(&chi_n),
                base.component(&chi_n, TorusElement::monomial(&theta, vec![2, -1], Scalar::from_int(3))),
            ];
            for x in &reps {
                let f = infl.eigenfunction(&chi, x);
                assert!(infl.is_eigenfunction(&chi, &f), "{label}: eigenfunction test fails");
                for h in &h_elements {
                    let weight = Scalar::phase(chi.phase(&(n_zero.clone(), h.clone())));
                    let expected = base.scale(x, &weight);
                    let got = f.value(h);
                    assert_eq!(
                        got, expected,
                        "{label}: component at chi={chi:?}, h={h:?} is not chi_H tensor A(chi_N)"
                    );
                    let got_support: Vec<_> = got.components().map(|(c, _)| c.clone()).collect();
                    let want_support: Vec<_> =
                        expected.components().map(|(c, _)| c.clone()).collect();
                    assert_eq!(got_support, want_support, "{label}: support mismatch");
                }
            }

            // The inflated spectral invariant only sees the restriction.
            let via_infl = infl.picard_of(&chi).expect("picard");
            assert_eq!(via_infl, base.phi(&chi_n).expect("phi"), "{label}: phi'({chi:?}) != phi(chi_N)");
            assert_eq!(via_infl, base.picard_of(&chi_n).expect("picard"), "{label}: picard mismatch");
        }

        // A generic function decomposes into its isotypic parts, each one an
        // eigenfunction, and the parts sum back to the function.
        let x_a = base.add(
            &base.component(&[0], TorusElement::monomial(&theta, vec![1, 0], Scalar::from_int(1))),
            &base.component(&[1], TorusElement::monomial(&theta, vec![0, 1], Scalar::from_int(2))),
        )
        .expect("graded sum");
        let x_b = base.component(&[1], TorusElement::monomial(&theta, vec![-1, 2], Scalar::from_int(5)));
        let generic = infl
            .function(|h| if h.iter().all(|&c| c == 0) { Ok(x_a.clone()) } else { Ok(x_b.clone()) })
            .expect("function");

        let mut resum = infl.function(|_| Ok(base.zero())).expect("zero function");
        for chi in infl.ext().characters() {
            let part = infl.isotypic_projection(&chi, &generic).expect("projection");
            assert!(infl.is_eigenfunction(&chi, &part), "{label}: projection not isotypic");
            resum = infl.add(&resum, &part).expect("sum");
        }
        assert_eq!(resum, generic, "{label}: isotypic projections do not sum back");
    }
    println!("criterion 7: PASS - inflation along both C2 extensions is chi_H tensor A(chi_N)");
}

fn mat_mul2(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::mat2(
        a[(0, 0)] * b[(0, 0)] + a[(0, 1)] * b[(1, 0)],
        a[(0, 0)] * b[(0, 1)] + a[(0, 1)] * b[(1, 1)],
        a[(1, 0)] * b[(0, 0)] + a[(1, 1)] * b[(1, 0)],
        a[(1, 0)] * b[(0, 1)] + a[(1, 1)] * b[(1, 1)],
    )
}

fn inv2(m: &IntMatrix) -> IntMatrix {
    assert_eq!(m.det(), 1);
    IntMatrix::mat2(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

fn random_out_element(rng: &mut ChaCha8Rng) -> OutSmoothElement {
    let mut pt = || {
        let d1 = rng.random_range(1..=6i64);
        let n1 = rng.random_range(-6..=6i64);
        let d2 = rng.random_range(1..=6i64);
        let n2 = rng.random_range(-6..=6i64);
        TorusPoint::new(rat(n1, d1), rat(n2, d2))
    };
    let w = vec![pt(), pt()];
    let gens = [
        IntMatrix::mat2(0, -1, 1, 0),
        IntMatrix::mat2(0, 1, -1, 0),
        IntMatrix::mat2(1, 1, 0, 1),
        IntMatrix::mat2(1, -1, 0, 1),
    ];
    let mut m = IntMatrix::identity(2);
    for _ in 0..rng.random_range(0..=4) {
        m = mat_mul2(&m, &gens[rng.random_range(0..4)]);
    }
    OutSmoothElement::new(w, m).expect("det 1 by construction")
}

#[test]
fn criterion_8_outer_group_structure() {
    let theta = ThetaMatrix::standard_2d();

    // Conjugating a gauge automorphism by a lattice automorphism is again a
    // gauge automorphism, with the parameter twisted by the inverse matrix.
    let s = vec![&poly("1/3") + &poly("t/7"), &poly("1/5") + &poly("2*t/3")];
    for m in [IntMatrix::mat2(0, -1, 1, 0), IntMatrix::mat2(1, 1, 0, 1)] {
        let minv = inv2(&m);
        let s_prime: Vec<RatPoly> = (0..2)
            .map(|i| {
                let mut acc = RatPoly::zero();
                for (j, sj) in s.iter().enumerate() {
                    acc = &acc + &sj.scale(&rat(minv[(i, j)], 1));
                }
                acc
            })
            .collect();

        for l1 in -3..=3i64 {
            for l2 in -3..=3i64 {
                let x = TorusElement::monomial(&theta, vec![l1, l2], Scalar::one());
                let pulled = qtori::smooth::lattice_inverse_apply(&m, &x).expect("inverse transform");
                let conjugated =
                    pulled.gauge_raw(&s).lattice_transform(&m).expect("forward transform");
                let direct = x.gauge_raw(&s_prime);
                assert_eq!(
                    conjugated, direct,
                    "conjugation identity fails at lambda=({l1},{l2}) for M={m:?}"
                );
            }
        }
    }

    // Group axioms on a random sample of outer elements.
    let mut rng = ChaCha8Rng::seed_from_u64(0x4f55_5421);
    let elems: Vec<OutSmoothElement> = (0..200).map(|_| random_out_element(&mut rng)).collect();
    let id = OutSmoothElement::identity();
    for x in &elems {
        assert_eq!(&out_mul(x, &id), x, "right identity fails");
        assert_eq!(&out_mul(&id, x), x, "left identity fails");
        assert_eq!(out_mul(x, &out_inv(x)), id, "right inverse fails");
        assert_eq!(out_mul(&out_inv(x), x), id, "left inverse fails");
    }
    for w in elems.windows(3) {
        let lhs = out_mul(&out_mul(&w[0], &w[1]), &w[2]);
        let rhs = out_mul(&w[0], &out_mul(&w[1], &w[2]));
        assert_eq!(lhs, rhs, "associativity fails on a random triple");
    }

    // Translations by lattice points of Z^2 + theta Z^2 are inner, so they
    // canonicalize to the identity, through both constructors.
    for (a0, b0, a1, b1) in [(1, 0, 0, 1), (2, 3, -1, 2), (0, -4, 5, 0)] {
        let w = vec![
            TorusPoint::new(rat(a0, 1), rat(b0, 1)),
            TorusPoint::new(rat(a1, 1), rat(b1, 1)),
        ];
        let x = OutSmoothElement::new(w, IntMatrix::identity(2)).expect("identity matrix");
        assert!(x.is_identity(), "integer translation {a0},{b0},{a1},{b1} is not inner");
        assert_eq!(x, id);

        let gauge = GaugeVec {
            a: vec![rat(a0, 1), rat(a1, 1)],
            b: vec![rat(b0, 1), rat(b1, 1)],
        };
        let y = OutSmoothElement::from_gauge(&gauge, IntMatrix::identity(2)).expect("from gauge");
        assert!(y.is_identity(), "gauge-built integer translation is not inner");
    }

    println!("criterion 8: PASS - conjugation identity, group axioms, and inner translations hold");
}

#[test]
fn criterion_9_negative_controls() {
    let theta = ThetaMatrix::standard_2d();

    // A theta' violating the covering relation is rejected outright.
    let m = IntMatrix::mat2(2, 0, 0, 1);
    let bad = ThetaMatrix::two_d(poly("t/3"));
    match build_connected_covering(&theta, &m, &bad) {
        Err(Error::RelationViolated { .. }) => {}
        other => panic!("expected RelationViolated, got {other:?}"),
    }

    // Perturb one unit-slot entry of a valid C2 cocycle table by e(1/3).
    // Unitality pins the unit row and column of sigma, so admissible
    // corrections are the normalized cochains: they vanish on unit slots.
    // The perturbed table must stay non-associative under every such
    // correction with denominator at most 12, constant or t-linear.
    let group = FiniteAbelianGroup::new(vec![2]).expect("group");
    let images = vec![image([[1, 2, 0, 1], [0, 1, 0, 1]], ID2)];
    let lifts: Vec<Lift> = group
        .elements()
        .iter()
        .map(|g| {
            let img = hom_image(&images, g);
            Lift { x: img.gauge_lift(), m: img.matrix().clone() }
        })
        .collect();
    let table = compute_cocycle(&theta, &group, &lifts).expect("cocycle table");

    let mut perturbed = table.clone();
    let slot = (vec![0i64], vec![1i64]);
    {
        let entry = perturbed.get_mut(&slot).expect("unit slot exists");
        entry.phase = PhaseExponent::new(entry.phase.as_poly() + &RatPoly::constant(rat(1, 3)));
    }

    match solve_associativity(&theta, &group, &lifts, &perturbed) {
        Err(Error::Obstruction(_)) => {}
        other => panic!("expected an obstruction, got {other:?}"),
    }

    // Exhaustive search over the normalized cochain lattice: the only
    // non-unit slot of C2 is ([1],[1]); phases j/12 + (k/12) t.
    let free_slot = (vec![1i64], vec![1i64]);
    let mut candidates = 0usize;
    for j in 0..12i64 {
        for k in 0..12i64 {
            let mut corrected = perturbed.clone();
            let entry = corrected.get_mut(&free_slot).expect("free slot exists");
            let correction = &RatPoly::constant(rat(j, 12)) + &RatPoly::term(rat(k, 12), 1);
            entry.phase = PhaseExponent::new(entry.phase.as_poly() + &correction);

            let violated = verify_cocycle_identity(&theta, &group, &lifts, &corrected)
                .expect("identity check runs");
            assert!(
                violated.is_some(),
                "correction {j}/12 + {k}/12 t unexpectedly absorbs the perturbation"
            );
            candidates += 1;
        }
    }
    assert_eq!(candidates, 144);

    println!("criterion 9: PASS - relation violation rejected; e(1/3) perturbation survives all {candidates} corrections");
}
