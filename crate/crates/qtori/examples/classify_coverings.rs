//! Classify all connected coverings of the quantum 2-torus up to a given
//! index: one row per sublattice in Hermite normal form, with the solved
//! theta' and the verification verdict.

use qtori::covering::classify_coverings;
use qtori::torus::ThetaMatrix;

fn main() -> qtori::Result<()> {
    let theta = ThetaMatrix::standard_2d();
    let rows = classify_coverings(&theta, 4, 0, 3)?;

    println!("{:>5} {:>6} {:>12} {:>14} {:>8}", "index", "M", "invariants", "theta'[1,2]", "passed");
    for row in &rows {
        let m = format!(
            "[{},{};{},{}]",
            row.m[(0, 0)],
            row.m[(0, 1)],
            row.m[(1, 0)],
            row.m[(1, 1)]
        );
        println!(
            "{:>5} {:>6} {:>12} {:>14} {:>8}",
            row.index,
            m,
            format!("{:?}", row.invariant_factors),
            row.theta_prime.entry(0, 1).to_string(),
            row.report.all_passed()
        );
    }
    println!("total: {}", rows.len());

    Ok(())
}
