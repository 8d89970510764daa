//! Inflate a smooth covering along a central extension of its dual group.
//! The same C2 base inflates two ways: by the split extension (giving
//! C2 x C2) and by the cyclic one (giving Z4), and in both cases each
//! isotypic component is the base component tensored with a character.

use num::rational::BigRational;
use qtori::abgroup::FiniteAbelianGroup;
use qtori::lattice::IntMatrix;
use qtori::smooth::{build_smooth_covering, inflate_by_extension, OutSmoothElement, TorusPoint};
use qtori::torus::ThetaMatrix;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();
    let group = FiniteAbelianGroup::new(vec![2])?;
    let image = OutSmoothElement::new(
        vec![TorusPoint::new(rat(0, 1), rat(1, 2)), TorusPoint::new(rat(0, 1), rat(0, 1))],
        IntMatrix::identity(2),
    )?;
    let base = build_smooth_covering(&theta, &group, std::slice::from_ref(&image))?;

    let cocycles: Vec<(&str, Box<dyn Fn(&[i64], &[i64]) -> Vec<i64>>)> = vec![
        ("split:  omega = 0      ", Box::new(|_: &[i64], _: &[i64]| vec![0])),
        ("cyclic: omega = h1*h2  ", Box::new(|h1: &[i64], h2: &[i64]| vec![(h1[0] * h2[0]).rem_euclid(2)])),
    ];

    for (label, omega) in cocycles {
        let h_group = FiniteAbelianGroup::new(vec![2])?;
        let infl = inflate_by_extension(base.clone(), h_group, omega)?;
        let orders: Vec<i64> =
            infl.ext().elements().iter().map(|e| infl.ext().order_of(e)).collect();
        println!("{label} extension has element orders {orders:?}");

        for chi in infl.ext().characters() {
            let chi_n = chi.restrict_to_n(infl.ext());
            let x = base.unitary(&chi_n);
            let f = infl.eigenfunction(&chi, &x);
            println!(
                "  character restricting to {chi_n:?}: eigenfunction check = {}, picard = {}",
                infl.is_eigenfunction(&chi, &f),
                infl.picard_of(&chi)?
            );
        }
    }

    Ok(())
}
