//! Node-level differential SPNs from per-vertex intensity signals.

use spnet::node_differential_spn;
use spnet::synth::{simulate_node_signals, PlantedEffect, SyntheticDesign};

fn main() -> spnet::Result<()> {
    let j = 3;
    // Node signals use the first index of each planted target as the vertex.
    let design = SyntheticDesign::new(30, 16, j)
        .plant(PlantedEffect::linear(4, 4, 1.0, j))
        .plant(PlantedEffect::linear(17, 17, -1.0, j));
    let data = simulate_node_signals(&design, 3)?;
    let (up, down) = node_differential_spn(&data, 0.05)?;
    let names = |v: &[usize]| {
        v.iter()
            .map(|&i| data.node_labels()[i].clone())
            .collect::<Vec<_>>()
    };
    println!("upweighted:   {:?}", names(&up.flagged_nodes));
    println!("downweighted: {:?}", names(&down.flagged_nodes));
    Ok(())
}
