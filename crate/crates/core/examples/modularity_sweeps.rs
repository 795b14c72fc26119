//! Module counts of greedy modularity as a graph becomes more random and as
//! it gains edges.
//!
//! Usage: `cargo run --release --example modularity_sweeps [edges] [replicates] [seed]`

use spnet::generators::ring_lattice;
use spnet::{edges_sweep, greedy_modularity, randomness_sweep, Topology};

fn main() -> spnet::Result<()> {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<u64>().expect("numeric argument"));
    let n_e = args.next().unwrap_or(600) as usize;
    let replicates = args.next().unwrap_or(20) as usize;
    let seed = args.next().unwrap_or(2024);
    let n_v = 112;

    let lattice = ring_lattice(n_v, n_e)?;
    let p = greedy_modularity(&lattice)?;
    println!(
        "ring lattice, {n_v} nodes, {n_e} edges: {} modules, Q = {:.4}",
        p.module_count, p.q
    );

    let steps: Vec<usize> = (0..=500).step_by(50).collect();
    let sweep = randomness_sweep(n_v, n_e, &steps, replicates, seed)?;
    println!("\nrewiring steps vs modules ({replicates} replicates)");
    for row in &sweep.rows {
        println!(
            "{:>5}  {:>7.2} ± {:.2}",
            row.parameter, row.mean_modules, row.sd_modules
        );
    }

    let grid = [100, 600, 1100, 1600, 2100];
    for topology in [Topology::Lattice, Topology::Random] {
        let sweep = edges_sweep(n_v, &grid, topology, replicates, seed)?;
        println!("\nedges vs modules, {topology:?}");
        for row in &sweep.rows {
            println!(
                "{:>5}  {:>7.2} ± {:.2}",
                row.parameter, row.mean_modules, row.sd_modules
            );
        }
    }
    Ok(())
}
