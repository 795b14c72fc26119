//! Differential SPNs: edges that strengthen or weaken along an ordered
//! condition factor, tested with a repeated-measures model per edge.

use spnet::differential_spn;
use spnet::synth::{simulate_dataset, PlantedEffect, SyntheticDesign};

fn main() -> spnet::Result<()> {
    let j = 4;
    let design = SyntheticDesign::new(12, 20, j)
        .plant(PlantedEffect::linear(0, 3, 1.0, j))
        .plant(PlantedEffect::linear(5, 9, 1.0, j))
        .plant(PlantedEffect::linear(2, 8, -1.0, j));
    let data = simulate_dataset(&design, 5)?;

    let (plus, minus) = differential_spn(&data, 0.05)?;
    println!(
        "{} edges tested, {} significant",
        plus.hypotheses.len(),
        plus.correction.rejected_count()
    );
    println!("SPN+ (gained): {:?}", plus.network.edges());
    println!("SPN- (lost):   {:?}", minus.network.edges());

    // Reversing the condition order swaps the two networks.
    let (rplus, rminus) = differential_spn(&data.with_reversed_conditions(), 0.05)?;
    println!(
        "reversed: SPN+ {:?}  SPN- {:?}",
        rplus.network.edges(),
        rminus.network.edges()
    );
    Ok(())
}
