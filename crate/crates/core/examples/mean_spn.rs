//! Mean SPN of a synthetic study: edges whose Fisher-z values sit well above
//! the grand mean in one condition.

use spnet::mean_spn;
use spnet::synth::{simulate_dataset, PlantedEffect, SyntheticDesign};

fn main() -> spnet::Result<()> {
    let design = SyntheticDesign::new(10, 20, 3)
        .with_baseline(0.2)
        .plant(PlantedEffect::constant(0, 1, 1.0, 3))
        .plant(PlantedEffect::constant(2, 7, 1.0, 3))
        .plant(PlantedEffect::single(4, 5, 1, 1.0, 3));
    let data = simulate_dataset(&design, 11)?;

    for c in 0..data.n_conditions() {
        let spn = mean_spn(&data, c, 0.05)?;
        println!(
            "condition {}: {} of {} edges significant, network {:?}",
            data.condition_labels()[c],
            spn.correction.rejected_count(),
            spn.hypotheses.len(),
            spn.network.edges()
        );
    }
    Ok(())
}
