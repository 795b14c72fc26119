//! Density thresholding and density-integrated metrics.
//!
//! A weighted graph is reduced to binary graphs by keeping its `k`
//! strongest edges, a metric is evaluated at each `k`, and the values are
//! averaged under a probability mass over densities (uniform by default).
//! Because only the rank order of the weights matters, any strictly
//! monotone transform of the weights leaves every selected edge set, and
//! hence the integrated metric, unchanged.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{global_efficiency, local_efficiency, BinaryGraph, WeightedGraph};
use crate::matrix::pair_count;
use crate::modularity::greedy_modularity;

/// Binary-graph metrics available to density integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    GlobalEfficiency,
    LocalEfficiency,
    ModularityCount,
    ModularityQ,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::GlobalEfficiency,
        Metric::LocalEfficiency,
        Metric::ModularityCount,
        Metric::ModularityQ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::GlobalEfficiency => "global_efficiency",
            Metric::LocalEfficiency => "local_efficiency",
            Metric::ModularityCount => "modularity_count",
            Metric::ModularityQ => "modularity_q",
        }
    }

    pub fn evaluate(self, g: &BinaryGraph) -> Result<f64> {
        match self {
            Metric::GlobalEfficiency => global_efficiency(g),
            Metric::LocalEfficiency => local_efficiency(g),
            Metric::ModularityCount => Ok(greedy_modularity(g)?.module_count as f64),
            Metric::ModularityQ => Ok(greedy_modularity(g)?.q),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown metric `{s}`")))
    }
}

/// A metric evaluated along a grid of edge counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    /// Edge counts `k`, in grid order.
    pub densities: Vec<usize>,
    pub values: Vec<f64>,
    /// Probability mass at each `k`.
    pub weights: Vec<f64>,
    pub integrated: f64,
}

/// Candidate edges of a weighted graph, strongest first.
///
/// Equal scores are ordered lexicographically by `(i, j)`, so selections
/// are deterministic and nested in `k`.
#[derive(Clone, Debug)]
pub struct EdgeRanking {
    n: usize,
    labels: Vec<String>,
    order: Vec<(usize, usize)>,
}

impl EdgeRanking {
    /// Ranks the positive-weight pairs of `g` by decreasing weight.
    pub fn of(g: &WeightedGraph) -> Self {
        let scored = g
            .positive_edges()
            .into_iter()
            .map(|(i, j)| ((i, j), g.weight(i, j)))
            .collect();
        Self::from_scores(g.n(), g.node_labels().to_vec(), scored, true)
    }

    /// Ranks arbitrary scored pairs. `strongest_high` puts large scores first;
    /// otherwise small scores come first.
    pub fn from_scores(
        n: usize,
        labels: Vec<String>,
        mut scored: Vec<((usize, usize), f64)>,
        strongest_high: bool,
    ) -> Self {
        // sort_by is stable and the pairs arrive in lexicographic order
        scored.sort_by_key(|s| s.0);
        if strongest_high {
            scored.sort_by(|a, b| b.1.total_cmp(&a.1));
        } else {
            scored.sort_by(|a, b| a.1.total_cmp(&b.1));
        }
        Self {
            n,
            labels,
            order: scored.into_iter().map(|(p, _)| p).collect(),
        }
    }

    /// Number of selectable edges.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[(usize, usize)] {
        &self.order
    }

    /// Binary graph of the `k` strongest edges.
    pub fn select(&self, k: usize) -> Result<BinaryGraph> {
        if k > pair_count(self.n) {
            return Err(Error::Domain(format!(
                "density {k} exceeds the {} node pairs of a {}-node graph",
                pair_count(self.n),
                self.n
            )));
        }
        if k > self.order.len() {
            return Err(Error::Domain(format!(
                "density {k} exceeds the {} positive-weight edges",
                self.order.len()
            )));
        }
        BinaryGraph::from_edges(self.n, self.order[..k].iter().copied())?
            .with_labels(self.labels.clone())
    }

    /// Evaluates `metric` along `grid` (default `1..=len`) under `mass`
    /// (default uniform).
    pub fn profile<M>(
        &self,
        metric: M,
        grid: Option<&[usize]>,
        mass: Option<&[f64]>,
    ) -> Result<DensityProfile>
    where
        M: Fn(&BinaryGraph) -> Result<f64> + Sync,
    {
        let densities: Vec<usize> = match grid {
            Some(g) => g.to_vec(),
            None => (1..=self.len()).collect(),
        };
        if densities.is_empty() {
            return Err(Error::Domain("density grid is empty".into()));
        }
        let weights = match mass {
            Some(p) => {
                if p.len() != densities.len() {
                    return Err(Error::Domain(format!(
                        "{} mass values for {} grid points",
                        p.len(),
                        densities.len()
                    )));
                }
                if p.iter().any(|&w| !w.is_finite() || w < 0.0) {
                    return Err(Error::Domain("density mass must be nonnegative".into()));
                }
                let total: f64 = p.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::Domain(format!(
                        "density mass sums to {total}, not 1"
                    )));
                }
                p.to_vec()
            }
            None => vec![1.0 / densities.len() as f64; densities.len()],
        };
        let values = densities
            .par_iter()
            .map(|&k| metric(&self.select(k)?))
            .collect::<Result<Vec<f64>>>()?;
        let integrated = values.iter().zip(&weights).map(|(v, w)| v * w).sum();
        Ok(DensityProfile {
            densities,
            values,
            weights,
            integrated,
        })
    }
}

/// Unweighted graph of the `k` largest-weight edges of `g`.
pub fn density_threshold(g: &WeightedGraph, k: usize) -> Result<BinaryGraph> {
    EdgeRanking::of(g).select(k)
}

/// Density-integrated `metric` under the uniform mass on `grid`.
pub fn density_integrated_metric<M>(
    g: &WeightedGraph,
    metric: M,
    grid: Option<&[usize]>,
) -> Result<DensityProfile>
where
    M: Fn(&BinaryGraph) -> Result<f64> + Sync,
{
    EdgeRanking::of(g).profile(metric, grid, None)
}

/// Density-integrated `metric` under a caller-supplied mass over `grid`.
pub fn density_integrated_metric_with_mass<M>(
    g: &WeightedGraph,
    metric: M,
    grid: Option<&[usize]>,
    mass: &[f64],
) -> Result<DensityProfile>
where
    M: Fn(&BinaryGraph) -> Result<f64> + Sync,
{
    EdgeRanking::of(g).profile(metric, grid, Some(mass))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

/// Side-by-side profiles of `g` and of `h` applied to its weights.
#[derive(Clone, Debug)]
pub struct MonotoneReport {
    pub direction: Monotonicity,
    /// Every `k` whose selected edge sets differ.
    pub mismatched_densities: Vec<usize>,
    pub original: DensityProfile,
    pub transformed: DensityProfile,
}

impl MonotoneReport {
    pub fn edge_sets_match(&self) -> bool {
        self.mismatched_densities.is_empty()
    }

    pub fn holds(&self) -> bool {
        self.edge_sets_match()
            && (self.original.integrated - self.transformed.integrated).abs() <= 1e-12
    }
}

/// Determines whether `h` is strictly increasing or strictly decreasing on
/// the distinct positive weights of `g`.
pub fn monotonicity_on(g: &WeightedGraph, h: impl Fn(f64) -> f64) -> Result<Monotonicity> {
    let mut ws: Vec<f64> = g
        .positive_edges()
        .into_iter()
        .map(|(i, j)| g.weight(i, j))
        .collect();
    ws.sort_by(f64::total_cmp);
    ws.dedup();
    let hs: Vec<f64> = ws.iter().map(|&w| h(w)).collect();
    if let Some(pos) = hs.iter().position(|v| !v.is_finite()) {
        return Err(Error::Precondition(format!(
            "transform is not finite at weight {}",
            ws[pos]
        )));
    }
    let pairs = || ws.windows(2).zip(hs.windows(2));
    if pairs().all(|(_, hv)| hv[1] > hv[0]) {
        Ok(Monotonicity::Increasing)
    } else if pairs().all(|(_, hv)| hv[1] < hv[0]) {
        Ok(Monotonicity::Decreasing)
    } else {
        // Name a witness: a pair where the direction departs from the first step.
        let first_up = hs[1] > hs[0];
        let (w, hv) = pairs()
            .find(|(_, hv)| (hv[1] > hv[0]) != first_up || hv[1] == hv[0])
            .expect("non-monotone sequence has a witness");
        Err(Error::Precondition(format!(
            "transform is not strictly monotone: h({}) = {}, h({}) = {}",
            w[0], hv[0], w[1], hv[1]
        )))
    }
}

/// Compares density profiles of `g` and `h(g)` edge set by edge set.
///
/// `h` acts on positive weights only; absent pairs stay absent. For a
/// decreasing `h` the transformed selection takes the smallest scores first.
pub fn monotone_invariance_report<H, M>(
    g: &WeightedGraph,
    h: H,
    metric: M,
) -> Result<MonotoneReport>
where
    H: Fn(f64) -> f64,
    M: Fn(&BinaryGraph) -> Result<f64> + Sync,
{
    let direction = monotonicity_on(g, &h)?;
    let original = EdgeRanking::of(g);
    let scored = g
        .positive_edges()
        .into_iter()
        .map(|(i, j)| ((i, j), h(g.weight(i, j))))
        .collect();
    let transformed = EdgeRanking::from_scores(
        g.n(),
        g.node_labels().to_vec(),
        scored,
        direction == Monotonicity::Increasing,
    );
    let mismatched_densities = (1..=original.len())
        .filter(|&k| {
            let mut a = original.order[..k].to_vec();
            let mut b = transformed.order[..k].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            a != b
        })
        .collect();
    Ok(MonotoneReport {
        direction,
        mismatched_densities,
        original: original.profile(&metric, None, None)?,
        transformed: transformed.profile(&metric, None, None)?,
    })
}

/// Whether the density-integrated metric of `g` survives the monotone map `h`.
pub fn verify_monotone_invariance<H, M>(g: &WeightedGraph, h: H, metric: M) -> Result<bool>
where
    H: Fn(f64) -> f64,
    M: Fn(&BinaryGraph) -> Result<f64> + Sync,
{
    Ok(monotone_invariance_report(g, h, metric)?.holds())
}
