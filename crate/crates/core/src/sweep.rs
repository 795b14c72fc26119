//! Seeded simulation sweeps relating topological randomness and edge
//! count to the number of greedy-modularity modules.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{derive_seed, random_graph, rewire, ring_lattice};
use crate::modularity::greedy_modularity;
use crate::stats::mean_sd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Lattice,
    Random,
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Topology::Lattice),
            "random" => Ok(Topology::Random),
            other => Err(Error::Validation(format!("unknown topology `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Rewiring steps or edge count, depending on the sweep.
    pub parameter: usize,
    pub replicates: usize,
    pub mean_modules: f64,
    pub sd_modules: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub seed: u64,
    pub topology: Topology,
}

impl SweepResult {
    /// Writes `parameter,replicates,mean_modules,sd_modules` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn means(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.mean_modules).collect()
    }
}

fn summarize(parameter: usize, counts: &[usize]) -> SweepRow {
    let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let (mean, sd) = mean_sd(&values);
    SweepRow {
        parameter,
        replicates: counts.len(),
        mean_modules: mean,
        sd_modules: sd,
    }
}

/// Runs `build(point, replicate)` for every grid point and replicate and
/// summarizes module counts per point, in grid order.
fn run_grid<F>(grid: &[usize], replicates: &[usize], build: F) -> Result<Vec<SweepRow>>
where
    F: Fn(usize, usize) -> Result<crate::graph::BinaryGraph> + Sync,
{
    let tasks: Vec<(usize, usize)> = replicates
        .iter()
        .enumerate()
        .flat_map(|(i, &reps)| (0..reps).map(move |r| (i, r)))
        .collect();
    let counts = tasks
        .par_iter()
        .map(|&(i, r)| Ok(greedy_modularity(&build(i, r)?)?.module_count))
        .collect::<Result<Vec<usize>>>()?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut offset = 0;
    for (i, &reps) in replicates.iter().enumerate() {
        rows.push(summarize(grid[i], &counts[offset..offset + reps]));
        offset += reps;
    }
    Ok(rows)
}

fn check_replicates(replicates: usize) -> Result<()> {
    if replicates == 0 {
        return Err(Error::Domain("need at least one replicate".into()));
    }
    Ok(())
}

/// Module counts of ring lattices rewired `steps` times, for each value in
/// `rewiring_grid`, with the edge count held at `n_e`.
pub fn randomness_sweep(
    n_v: usize,
    n_e: usize,
    rewiring_grid: &[usize],
    replicates: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_replicates(replicates)?;
    let lattice = ring_lattice(n_v, n_e)?;
    let reps = vec![replicates; rewiring_grid.len()];
    let rows = run_grid(rewiring_grid, &reps, |i, r| {
        rewire(&lattice, rewiring_grid[i], derive_seed(seed, i, r))
    })?;
    Ok(SweepResult {
        rows,
        seed,
        topology: Topology::Lattice,
    })
}

/// Module counts as a function of edge count. Lattice rows are
/// deterministic, so they are computed once and reported with one replicate.
pub fn edges_sweep(
    n_v: usize,
    edge_grid: &[usize],
    topology: Topology,
    replicates: usize,
    seed: u64,
) -> Result<SweepResult> {
    check_replicates(replicates)?;
    let per_point = match topology {
        Topology::Lattice => 1,
        Topology::Random => replicates,
    };
    let reps = vec![per_point; edge_grid.len()];
    let rows = run_grid(edge_grid, &reps, |i, r| match topology {
        Topology::Lattice => ring_lattice(n_v, edge_grid[i]),
        Topology::Random => random_graph(n_v, edge_grid[i], derive_seed(seed, i, r)),
    })?;
    Ok(SweepResult {
        rows,
        seed,
        topology,
    })
}
