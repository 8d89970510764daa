//! The bimodule attached to an automorphism of the quantum 2-torus: the
//! algebra acts on itself on the left through the automorphism and on the
//! right untwisted, with inner products on both sides.

use num::rational::BigRational;
use qtori::ratpoly::RatPoly;
use qtori::smooth::{morita_module_of, AutomorphismDescriptor};
use qtori::torus::{ThetaMatrix, TorusElement};

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();

    // Twist by an inner shift, a gauge phase, and the lattice flip -I.
    let descriptor = AutomorphismDescriptor {
        inner: vec![1, 0],
        gauge: vec![
            RatPoly::constant(BigRational::new(1.into(), 3.into())),
            RatPoly::zero(),
        ],
        matrix: qtori::IntMatrix::mat2(-1, 0, 0, -1),
    };
    let module = morita_module_of(&theta, descriptor)?;

    let u = TorusElement::generator(&theta, 0)?;
    let v = TorusElement::generator(&theta, 1)?;
    println!("left action of u on v  = {}", module.left_action(&u, &v)?);
    println!("right action of v on u = {}", module.right_action(&u, &v)?);
    println!("left inner <u, v>      = {}", module.left_inner(&u, &v)?);
    println!("right inner <u, v>     = {}", module.right_inner(&u, &v)?);

    let samples = vec![u.clone(), v.clone(), u.mul(&v)?, u.adjoint().mul(&v)?];
    let report = module.verify(&samples)?;
    println!("actions compatible     = {}", report.actions);
    println!("inner products         = {}", report.inner_products);
    println!("compatibility          = {}", report.compatibility);
    println!("all passed             = {}", report.all_passed());

    Ok(())
}
