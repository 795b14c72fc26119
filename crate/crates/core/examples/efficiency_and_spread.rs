//! Binary and weighted efficiency, weighted density, and the spread
//! condition under which weighted efficiency collapses to weighted density.

use spnet::{
    global_efficiency, local_efficiency, spread_condition_holds, weighted_density,
    weighted_efficiency, BinaryGraph, SquareMatrix, WeightedGraph,
};

fn main() -> spnet::Result<()> {
    let star = BinaryGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)])?;
    println!(
        "star K1,3     E_glob = {:.4}  E_loc = {:.4}",
        global_efficiency(&star)?,
        local_efficiency(&star)?
    );
    let path = BinaryGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)])?;
    println!("path P4       E_glob = {:.4}", global_efficiency(&path)?);

    // Weights within a factor of two of each other: every direct edge is a
    // shortest path, so efficiency equals mean weight.
    let tight = WeightedGraph::new(SquareMatrix::from_upper_triangle(
        4,
        &[0.9, 0.7, 0.6, 0.8, 0.5, 1.0],
    )?)?;
    report("spread holds", &tight)?;

    // A weak direct edge beside a strong two-hop route.
    let shortcut = WeightedGraph::new(SquareMatrix::from_upper_triangle(3, &[1.0, 0.1, 1.0])?)?;
    report("two-hop route", &shortcut)?;
    Ok(())
}

fn report(name: &str, g: &WeightedGraph) -> spnet::Result<()> {
    println!(
        "{name:<13} spread = {:<5}  E_W = {:.4}  K_W = {:.4}",
        spread_condition_holds(g)?,
        weighted_efficiency(g)?,
        weighted_density(g)?
    );
    Ok(())
}
