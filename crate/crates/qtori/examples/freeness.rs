//! Freeness and ergodicity of a dual action from its character support:
//! the action is free exactly when the support generates the whole dual
//! group, and the kernel is always the annihilator of what it generates.

use qtori::abgroup::FiniteAbelianGroup;
use qtori::covering::check_freeness_ergodic;

fn main() -> qtori::Result<()> {
    let g = FiniteAbelianGroup::new(vec![2, 2])?;

    let supports: Vec<(&str, Vec<Vec<i64>>)> = vec![
        ("trivial     ", vec![vec![0, 0]]),
        ("first factor", vec![vec![0, 0], vec![1, 0]]),
        ("diagonal    ", vec![vec![0, 0], vec![1, 1]]),
        ("full dual   ", vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]),
    ];

    for (label, support) in &supports {
        let report = check_freeness_ergodic(support, &g)?;
        println!(
            "{label}: subgroup order {} of {}, kernel {:?} (invariants {:?}), free = {}",
            report.subgroup_order,
            report.group_order,
            report.kernel,
            report.kernel_invariant_factors,
            report.free
        );
    }

    Ok(())
}
