//! The reporting pipeline: connectivity strength first, then summary
//! networks, then density-integrated topology.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::export::{render_graph, ExportFormat, GraphView};
use super::standardize::{standardize_weights, weighted_from_association, NegativePolicy};
use crate::density::{EdgeRanking, Metric};
use crate::error::{Error, Result};
use crate::graph::weighted_density;
use crate::spn::{differential_spn_with, mean_spn_with, SpnResult, StudyDataset};
use crate::stats::Correction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub base_rate: f64,
    pub correction: Correction,
    pub metric: Metric,
    /// Edge counts for the density profiles; default `1..=K` where `K` is
    /// the smallest positive-edge count in the group.
    pub density_grid: Option<Vec<usize>>,
    pub negative_policy: NegativePolicy,
    pub standardize: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            base_rate: 0.05,
            correction: Correction::Fdr,
            metric: Metric::GlobalEfficiency,
            density_grid: None,
            negative_policy: NegativePolicy::Reject,
            standardize: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub subject: String,
    pub condition: String,
    pub weighted_density: f64,
}

/// Density profile of one condition, averaged over subjects on a shared grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupProfile {
    pub condition: String,
    pub metric: Metric,
    pub densities: Vec<usize>,
    pub mean_values: Vec<f64>,
    pub integrated_mean: f64,
    /// Integrated value per subject, in subject order.
    pub subject_integrated: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub options: ReportOptions,
    pub density_table: Vec<DensityRow>,
    pub mean_spns: Vec<SpnResult>,
    pub differential_plus: SpnResult,
    pub differential_minus: SpnResult,
    pub profiles: Vec<GroupProfile>,
}

impl ReportBundle {
    pub fn degenerate_fits(&self) -> usize {
        self.differential_plus.degenerate_fits
    }

    pub fn density_table_csv(&self) -> String {
        let mut out = String::from("subject,condition,weighted_density\n");
        for row in &self.density_table {
            let _ = writeln!(
                out,
                "{},{},{}",
                row.subject, row.condition, row.weighted_density
            );
        }
        out
    }

    pub fn profiles_csv(&self) -> String {
        let mut out = String::from("condition,metric,k,mean_value\n");
        for p in &self.profiles {
            for (k, v) in p.densities.iter().zip(&p.mean_values) {
                let _ = writeln!(out, "{},{},{k},{v}", p.condition, p.metric);
            }
        }
        out
    }

    /// Writes the bundle into `dir` and returns the files in write order.
    pub fn write_to(
        &self,
        dir: &Path,
        coords: Option<&[crate::graph::Coords]>,
    ) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut files: Vec<(String, String)> =
            vec![("density_table.csv".into(), self.density_table_csv())];
        for (c, spn) in self.mean_spns.iter().enumerate() {
            let view = GraphView::Binary {
                graph: &spn.network,
                coords,
            };
            files.push((
                format!("mean_spn_{c}.dot"),
                render_graph(view, ExportFormat::Dot)?,
            ));
        }
        for (name, spn) in [
            ("plus", &self.differential_plus),
            ("minus", &self.differential_minus),
        ] {
            let view = GraphView::Binary {
                graph: &spn.network,
                coords,
            };
            files.push((
                format!("diff_spn_{name}.dot"),
                render_graph(view, ExportFormat::Dot)?,
            ));
        }
        files.push(("profiles.csv".into(), self.profiles_csv()));
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        files.push(("report.json".into(), json));

        let mut written = Vec::with_capacity(files.len());
        for (name, text) in files {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Runs the four report stages in order: weighted density per subject and
/// condition, mean SPN per condition, differential SPNs, and
/// density-integrated metric profiles per condition.
pub fn report_pipeline(data: &StudyDataset, options: &ReportOptions) -> Result<ReportBundle> {
    let mut density_table = Vec::new();
    let mut graphs = Vec::new();
    for (s, subject) in data.subject_ids().iter().enumerate() {
        let mut row = Vec::new();
        for (c, condition) in data.condition_labels().iter().enumerate() {
            let g = weighted_from_association(data.matrix(s, c), options.negative_policy)?;
            density_table.push(DensityRow {
                subject: subject.clone(),
                condition: condition.clone(),
                weighted_density: weighted_density(&g)?,
            });
            row.push(if options.standardize {
                standardize_weights(&g)?
            } else {
                g
            });
        }
        graphs.push(row);
    }

    let mean_spns = (0..data.n_conditions())
        .map(|c| mean_spn_with(data, c, options.base_rate, options.correction))
        .collect::<Result<Vec<_>>>()?;
    let (differential_plus, differential_minus) =
        differential_spn_with(data, options.base_rate, options.correction)?;

    let metric = options.metric;
    let mut profiles = Vec::with_capacity(data.n_conditions());
    for (c, condition) in data.condition_labels().iter().enumerate() {
        let rankings: Vec<EdgeRanking> =
            graphs.iter().map(|row| EdgeRanking::of(&row[c])).collect();
        let grid = match &options.density_grid {
            Some(g) => g.clone(),
            None => {
                let k = rankings.iter().map(EdgeRanking::len).min().unwrap_or(0);
                (1..=k).collect()
            }
        };
        let per_subject = rankings
            .iter()
            .map(|r| r.profile(|g| metric.evaluate(g), Some(&grid), None))
            .collect::<Result<Vec<_>>>()?;
        let n = per_subject.len() as f64;
        let mean_values = (0..grid.len())
            .map(|k| per_subject.iter().map(|p| p.values[k]).sum::<f64>() / n)
            .collect();
        let subject_integrated: Vec<f64> = per_subject.iter().map(|p| p.integrated).collect();
        profiles.push(GroupProfile {
            condition: condition.clone(),
            metric,
            densities: grid,
            mean_values,
            integrated_mean: subject_integrated.iter().sum::<f64>() / n,
            subject_integrated,
        });
    }

    Ok(ReportBundle {
        options: options.clone(),
        density_table,
        mean_spns,
        differential_plus,
        differential_minus,
        profiles,
    })
}
