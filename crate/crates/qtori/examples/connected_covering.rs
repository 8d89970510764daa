//! Build one connected covering of the quantum 2-torus: solve the covering
//! relation M theta' M^T = theta + K for theta', assemble the system, and
//! run the full verification report.

use qtori::covering::{build_connected_covering, check_connected_covering, solve_theta_prime};
use qtori::lattice::IntMatrix;
use qtori::torus::ThetaMatrix;

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();
    let m = IntMatrix::mat2(2, 1, 0, 3);
    let k = IntMatrix::zeros(2, 2);

    let theta_prime = solve_theta_prime(&theta, &m, &k)?;
    println!("M          = [{}, {}; {}, {}]", m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    println!("theta'[1,2] = {}", theta_prime.entry(0, 1));

    let sys = build_connected_covering(&theta, &m, &theta_prime)?;
    println!("deck group  = Z^2 / M Z^2 of order {}", sys.group.index());
    println!("invariants  = {:?}", sys.group.invariant_factors());

    let report = check_connected_covering(&sys, 3);
    println!("action_well_defined     = {}", report.action_well_defined);
    println!("relations_embed         = {}", report.relations_embed);
    println!("fixed_support_matches   = {}", report.fixed_support_matches);
    println!("fixed_algebra_generated = {}", report.fixed_algebra_generated);
    println!("characters_covered      = {}/{}", report.characters_covered, report.characters_total);
    println!("lift_restricts          = {}", report.lift_restricts);
    println!("lift_commutes           = {}", report.lift_commutes);
    println!("lift_ergodic            = {}", report.lift_ergodic);
    println!("action free             = {}", report.action_free());
    println!("all passed              = {}", report.all_passed());

    Ok(())
}
