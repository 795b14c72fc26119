use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matrix::{upper_pairs, SquareMatrix};

/// What to do with negative associations when building a weighted graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativePolicy {
    #[default]
    Reject,
    Absolute,
}

/// Weighted graph from a signed association matrix.
pub fn weighted_from_association(
    m: &SquareMatrix,
    policy: NegativePolicy,
) -> Result<WeightedGraph> {
    let m = m.validated_symmetric()?;
    let m = match policy {
        NegativePolicy::Absolute => m.map(f64::abs),
        NegativePolicy::Reject => {
            if let Some((i, j)) = upper_pairs(m.n()).find(|&(i, j)| m.get(i, j) < 0.0) {
                return Err(Error::Validation(format!(
                    "negative association {} at ({i}, {j}); pass --abs to use absolute values",
                    m.get(i, j)
                )));
            }
            m
        }
    };
    WeightedGraph::new(m)
}

/// Min-max rescaling of the positive weights onto `(0, 1]`:
/// `w' = (w - min + d) / (max - min + d)` with `d = (max - min) * 1e-6`.
/// Zero entries stay zero and the map is strictly increasing on positives.
pub fn standardize_weights(g: &WeightedGraph) -> Result<WeightedGraph> {
    let positives: Vec<f64> = g
        .positive_edges()
        .into_iter()
        .map(|(i, j)| g.weight(i, j))
        .collect();
    let min = positives.iter().copied().fold(f64::INFINITY, f64::min);
    let max = positives.iter().copied().fold(0.0, f64::max);
    if positives.is_empty() || max == min {
        return Err(Error::Degenerate(
            "standardization needs at least two distinct positive weights".into(),
        ));
    }
    let delta = (max - min) * 1e-6;
    let span = max - min + delta;
    g.map_weights(|w| (w - min + delta) / span)
}
