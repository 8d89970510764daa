//! The finite stage of the profinite covering poset: deck groups of all
//! sublattices up to an index bound, with the connecting surjections that
//! present the inverse limit.

use qtori::covering::profinite_tower;

fn main() -> qtori::Result<()> {
    let tower = profinite_tower(2, 6)?;

    println!("nodes:");
    for (i, node) in tower.nodes.iter().enumerate() {
        println!(
            "  {i:>2}: index {:>2}  invariants {:?}  M = [{},{};{},{}]",
            node.index,
            node.invariant_factors,
            node.m[(0, 0)],
            node.m[(0, 1)],
            node.m[(1, 0)],
            node.m[(1, 1)]
        );
    }

    println!("edges (finer -> coarser):");
    for edge in &tower.edges {
        let from = &tower.nodes[edge.from];
        let to = &tower.nodes[edge.to];
        println!(
            "  {:>2} -> {:<2}  {:?} surjects onto {:?}",
            edge.from, edge.to, from.invariant_factors, to.invariant_factors
        );
    }
    println!("{} nodes, {} edges", tower.nodes.len(), tower.edges.len());

    Ok(())
}
