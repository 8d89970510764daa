//! Enumerate the integer corrections K that make the covering relation
//! M theta' M^T = theta + K solvable within a bound, and the distinct
//! theta' they produce. Distinct corrections give the finitely many
//! covering structures over a fixed sublattice.

use qtori::covering::enumerate_theta_corrections;
use qtori::lattice::IntMatrix;
use qtori::torus::ThetaMatrix;

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();

    for bound in [0, 1, 2] {
        let m = IntMatrix::mat2(2, 0, 0, 1);
        let corrections = enumerate_theta_corrections(&theta, &m, bound)?;
        println!("bound {bound}: {} corrections over M = diag(2,1)", corrections.len());
        for (k, tp) in &corrections {
            println!("  K[1,2] = {:>2}  theta'[1,2] = {}", k[(0, 1)], tp.entry(0, 1));
        }
    }

    Ok(())
}
