//! Shared helpers for the acceptance suite: an independent normal-ordering
//! oracle that multiplies monomials by literal adjacent swaps, never through
//! the bilinear-form shortcut the library uses.

#![allow(dead_code)]

use num::rational::BigRational;
use num::BigInt;
use qtori::phase::{PhaseExponent, Scalar};
use qtori::ratpoly::RatPoly;
use qtori::torus::{ThetaMatrix, TorusElement};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// u_1^{e_1} * ... * u_n^{e_n}, built one generator power at a time through
/// the library product so both oracle sides share the same phase convention
/// for ordered words.
pub fn ordered_monomial(theta: &ThetaMatrix, exps: &[i64]) -> TorusElement {
    let mut acc = TorusElement::from_scalar(theta, Scalar::one());
    for (k, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let gen = TorusElement::generator(theta, k).expect("generator index in range");
        let pow = gen.monomial_pow(e).expect("monomial power of a generator");
        acc = acc.mul(&pow).expect("same theta");
    }
    acc
}

/// Brute-force product of two monomials: write both as words in signed
/// letters, then bubble-sort into ascending generator order, applying the
/// defining relation u_k^a u_l^b = e(a*b*theta_kl) u_l^b u_k^a once per
/// adjacent transposition. Letters of equal index commute freely and
/// opposite signs cancel without phase, so the sorted word is the ordered
/// monomial for the summed exponent.
pub fn swap_oracle_product(theta: &ThetaMatrix, lam: &[i64], mu: &[i64]) -> TorusElement {
    let mut word: Vec<(usize, i64)> = Vec::new();
    for exps in [lam, mu] {
        for (k, &e) in exps.iter().enumerate() {
            let s = e.signum();
            for _ in 0..e.abs() {
                word.push((k, s));
            }
        }
    }

    let mut phase = RatPoly::zero();
    loop {
        let mut swapped = false;
        for i in 0..word.len().saturating_sub(1) {
            let (k, a) = word[i];
            let (l, b) = word[i + 1];
            if k > l {
                let entry = theta.entry(k, l);
                phase = if a * b == 1 { &phase + entry } else { &phase - entry };
                word.swap(i, i + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }

    let sum: Vec<i64> = lam.iter().zip(mu).map(|(a, b)| a + b).collect();
    ordered_monomial(theta, &sum).scale(&Scalar::phase(PhaseExponent::new(phase)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_matches_defining_relation() {
        let theta = ThetaMatrix::standard_2d();
        // v * u = e(theta_21) u * v = e(-t) u * v, so the oracle product of
        // (0,1) and (1,0) carries exactly one downward swap.
        let prod = swap_oracle_product(&theta, &[0, 1], &[1, 0]);
        let expected = ordered_monomial(&theta, &[1, 1])
            .scale(&Scalar::phase(PhaseExponent::new(theta.entry(1, 0).clone())));
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "e(-t)*U(1,1)");
    }
}
