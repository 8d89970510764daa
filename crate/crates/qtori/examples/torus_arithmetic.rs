//! Exact arithmetic in the quantum 2-torus: the defining relation, adjoints,
//! and phase bookkeeping with a formal parameter t in place of theta.

use qtori::phase::Scalar;
use qtori::torus::{ThetaMatrix, TorusElement};

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();
    let u = TorusElement::generator(&theta, 0)?;
    let v = TorusElement::generator(&theta, 1)?;

    // u v versus v u: the commutation phase is exactly e(t).
    let uv = u.mul(&v)?;
    let vu = v.mul(&u)?;
    println!("u*v      = {uv}");
    println!("v*u      = {vu}");

    // The group commutator collapses to a pure phase.
    let commutator = uv.mul(&u.adjoint())?.mul(&v.adjoint())?;
    println!("u v u* v* = {commutator}");

    // Monomial powers stay exact, including negative exponents.
    let word = u.monomial_pow(3)?.mul(&v.monomial_pow(-2)?)?;
    println!("u^3 v^-2 = {word}");

    // Scalars live in the cyclotomic span of unit phases: e(1/2) is -1 on
    // the nose, so this element prints with a bare minus sign.
    let negated = u.scale(&Scalar::phase(qtori::PhaseExponent::from_rational(
        num::rational::BigRational::new(1.into(), 2.into()),
    )));
    println!("e(1/2)*u = {negated}");

    // Sums of monomials multiply distributively; exponents sort the display.
    let sum = u.add(&v)?;
    let square = sum.mul(&sum)?;
    println!("(u+v)^2  = {square}");

    Ok(())
}
