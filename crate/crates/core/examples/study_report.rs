//! End to end: write a study to disk as CSV matrices plus a JSON manifest,
//! load it back, run the reporting pipeline and export the networks.
//!
//! Usage: `cargo run --example study_report [output-dir]`

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use spnet::io::{
    load_dataset, render_matrix_csv, report_pipeline, Manifest, ManifestOptions, NegativePolicy,
    NodeSpec, ReportOptions, MANIFEST_SCHEMA,
};
use spnet::synth::{simulate_dataset, PlantedEffect, SyntheticDesign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("spnet-study"));
    let study = out.join("study");
    fs::create_dir_all(&study)?;

    let design = SyntheticDesign::new(8, 12, 3)
        .with_baseline(0.3)
        .plant(PlantedEffect::linear(0, 1, 1.2, 3))
        .plant(PlantedEffect::linear(3, 6, -1.2, 3));
    let data = simulate_dataset(&design, 1)?;

    let mut files = BTreeMap::new();
    for (s, subject) in data.subject_ids().iter().enumerate() {
        let mut row = BTreeMap::new();
        for (c, condition) in data.condition_labels().iter().enumerate() {
            let name = format!("{subject}_{condition}.csv");
            fs::write(study.join(&name), render_matrix_csv(data.matrix(s, c)))?;
            row.insert(condition.clone(), PathBuf::from(name));
        }
        files.insert(subject.clone(), row);
    }
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA,
        subjects: data.subject_ids().to_vec(),
        conditions: data.condition_labels().to_vec(),
        nodes: data
            .node_labels()
            .iter()
            .enumerate()
            .map(|(i, label)| NodeSpec {
                label: label.clone(),
                coords: Some([i as f64, 0.0, 0.0]),
            })
            .collect(),
        files,
        signals: None,
        // synthetic correlations can dip below zero
        options: ManifestOptions {
            abs: true,
            ..ManifestOptions::default()
        },
    };
    let manifest_path = study.join("manifest.json");
    fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?)?;

    let loaded = load_dataset(&manifest_path)?;
    let options = ReportOptions {
        negative_policy: NegativePolicy::Absolute,
        ..ReportOptions::default()
    };
    let bundle = report_pipeline(&loaded, &options)?;
    println!("SPN+ {:?}", bundle.differential_plus.network.edges());
    println!("SPN- {:?}", bundle.differential_minus.network.edges());
    for p in &bundle.profiles {
        println!(
            "{}: integrated {} = {:.4}",
            p.condition, p.metric, p.integrated_mean
        );
    }
    for path in bundle.write_to(&out.join("report"), loaded.node_coords())? {
        println!("wrote {}", path.display());
    }
    println!("\nsame study from the command line:");
    println!(
        "  spnet report --manifest {} --out-dir {}",
        manifest_path.display(),
        out.join("cli").display()
    );
    Ok(())
}
