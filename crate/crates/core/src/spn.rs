//! Statistical parametric networks: mass-univariate summaries of a
//! population of correlation matrices.
//!
//! Every hypothesis (edge or node) is tested separately, the family is
//! corrected for multiplicity, and the summary graph contains exactly the
//! surviving hypotheses with the right effect direction. Individual
//! networks are never thresholded and averaged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BinaryGraph, Coords};
use crate::matrix::{pair_count, upper_pairs, SquareMatrix};
use crate::stats::{
    fisher_z, grand_mean_z_test, mean_sd, repeated_measures_fit, Correction, EdgeModelFit,
    FdrDecision, Sign, TestResult,
};

/// Balanced `subjects x conditions` array of correlation matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyDataset {
    correlations: Vec<Vec<SquareMatrix>>,
    node_labels: Vec<String>,
    node_coords: Option<Vec<Coords>>,
    condition_labels: Vec<String>,
    subject_ids: Vec<String>,
}

impl StudyDataset {
    /// `correlations[i][j]` is subject `i` under condition `j`. Conditions
    /// are ordered along the experimental gradient.
    pub fn new(
        correlations: Vec<Vec<SquareMatrix>>,
        node_labels: Vec<String>,
        condition_labels: Vec<String>,
        subject_ids: Vec<String>,
    ) -> Result<Self> {
        let n_v = node_labels.len();
        if correlations.len() != subject_ids.len() {
            return Err(Error::Schema(format!(
                "{} subject rows for {} subject ids",
                correlations.len(),
                subject_ids.len()
            )));
        }
        if condition_labels.is_empty() || subject_ids.is_empty() {
            return Err(Error::InsufficientData("dataset has no cells".into()));
        }
        let mut checked = Vec::with_capacity(correlations.len());
        for (row, subject) in correlations.into_iter().zip(&subject_ids) {
            if row.len() != condition_labels.len() {
                return Err(Error::UnsupportedDesign(format!(
                    "subject `{subject}` has {} conditions, expected {}",
                    row.len(),
                    condition_labels.len()
                )));
            }
            let mut out = Vec::with_capacity(row.len());
            for (m, condition) in row.into_iter().zip(&condition_labels) {
                if m.n() != n_v {
                    return Err(Error::Schema(format!(
                        "matrix for ({subject}, {condition}) is {0}x{0}, expected {n_v}x{n_v}",
                        m.n()
                    )));
                }
                let m = m.validated_symmetric_hollow().map_err(|e| {
                    Error::Validation(format!("matrix for ({subject}, {condition}): {e}"))
                })?;
                if let Some((i, j)) = upper_pairs(n_v).find(|&(i, j)| m.get(i, j).abs() > 1.0) {
                    return Err(Error::Validation(format!(
                        "matrix for ({subject}, {condition}): entry ({i}, {j}) = {} outside [-1, 1]",
                        m.get(i, j)
                    )));
                }
                out.push(m);
            }
            checked.push(out);
        }
        Ok(Self {
            correlations: checked,
            node_labels,
            node_coords: None,
            condition_labels,
            subject_ids,
        })
    }

    pub fn with_coords(mut self, coords: Option<Vec<Coords>>) -> Result<Self> {
        if coords.as_ref().is_some_and(|c| c.len() != self.n_nodes()) {
            return Err(Error::Schema(
                "coordinate count differs from node count".into(),
            ));
        }
        self.node_coords = coords;
        Ok(self)
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_ids.len()
    }

    pub fn n_conditions(&self) -> usize {
        self.condition_labels.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.node_labels.len()
    }

    pub fn matrix(&self, subject: usize, condition: usize) -> &SquareMatrix {
        &self.correlations[subject][condition]
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn node_coords(&self) -> Option<&[Coords]> {
        self.node_coords.as_deref()
    }

    pub fn condition_labels(&self) -> &[String] {
        &self.condition_labels
    }

    pub fn subject_ids(&self) -> &[String] {
        &self.subject_ids
    }

    /// Same data with the condition gradient reversed.
    pub fn with_reversed_conditions(&self) -> Self {
        let mut out = self.clone();
        out.condition_labels.reverse();
        out.correlations.iter_mut().for_each(|row| row.reverse());
        out
    }

    /// Relabels nodes so that old node `i` becomes node `perm[i]`.
    pub fn with_permuted_nodes(&self, perm: &[usize]) -> Self {
        let n = self.n_nodes();
        let permute = |m: &SquareMatrix| {
            let mut out = SquareMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    out.set(perm[i], perm[j], m.get(i, j));
                }
            }
            out
        };
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.node_labels[i].clone();
        }
        Self {
            correlations: self
                .correlations
                .iter()
                .map(|row| row.iter().map(permute).collect())
                .collect(),
            node_labels: labels,
            node_coords: None,
            condition_labels: self.condition_labels.clone(),
            subject_ids: self.subject_ids.clone(),
        }
    }

    /// Fisher-z values per subject and condition, each the strict upper triangle.
    fn fisher_tables(&self) -> Result<Vec<Vec<Vec<f64>>>> {
        self.correlations
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| m.upper_triangle().into_iter().map(fisher_z).collect())
                    .collect()
            })
            .collect()
    }
}

/// Balanced array of time-averaged node intensities.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSignalDataset {
    signals: Vec<Vec<Vec<f64>>>,
    node_labels: Vec<String>,
    condition_labels: Vec<String>,
    subject_ids: Vec<String>,
}

impl NodeSignalDataset {
    /// `signals[i][j][v]` is node `v` for subject `i` under condition `j`.
    pub fn new(
        signals: Vec<Vec<Vec<f64>>>,
        node_labels: Vec<String>,
        condition_labels: Vec<String>,
        subject_ids: Vec<String>,
    ) -> Result<Self> {
        if signals.len() != subject_ids.len() {
            return Err(Error::Schema(format!(
                "{} subject rows for {} subject ids",
                signals.len(),
                subject_ids.len()
            )));
        }
        for (row, subject) in signals.iter().zip(&subject_ids) {
            if row.len() != condition_labels.len() {
                return Err(Error::UnsupportedDesign(format!(
                    "subject `{subject}` has {} conditions, expected {}",
                    row.len(),
                    condition_labels.len()
                )));
            }
            for (cell, condition) in row.iter().zip(&condition_labels) {
                if cell.len() != node_labels.len() {
                    return Err(Error::Schema(format!(
                        "signal for ({subject}, {condition}) has {} nodes, expected {}",
                        cell.len(),
                        node_labels.len()
                    )));
                }
                if cell.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Validation(format!(
                        "signal for ({subject}, {condition}) has a non-finite value"
                    )));
                }
            }
        }
        Ok(Self {
            signals,
            node_labels,
            condition_labels,
            subject_ids,
        })
    }

    pub fn n_subjects(&self) -> usize {
        self.subject_ids.len()
    }

    pub fn n_conditions(&self) -> usize {
        self.condition_labels.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.node_labels.len()
    }

    pub fn node_labels(&self) -> &[String] {
        &self.node_labels
    }

    pub fn condition_labels(&self) -> &[String] {
        &self.condition_labels
    }

    pub fn subject_ids(&self) -> &[String] {
        &self.subject_ids
    }

    pub fn signal(&self, subject: usize, condition: usize) -> &[f64] {
        &self.signals[subject][condition]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let mut out = self.clone();
        out.signals
            .iter_mut()
            .flatten()
            .flatten()
            .for_each(|v| *v = f(*v));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpnKind {
    Mean,
    DifferentialPlus,
    DifferentialMinus,
    NodeDifferentialPlus,
    NodeDifferentialMinus,
}

impl SpnKind {
    fn wanted_sign(self) -> Sign {
        match self {
            SpnKind::Mean | SpnKind::DifferentialPlus | SpnKind::NodeDifferentialPlus => {
                Sign::Positive
            }
            SpnKind::DifferentialMinus | SpnKind::NodeDifferentialMinus => Sign::Negative,
        }
    }
}

/// What a hypothesis is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Edge(usize, usize),
    Node(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    ZTest(TestResult),
    Model(EdgeModelFit),
}

impl Statistic {
    pub fn p_value(&self) -> f64 {
        match self {
            Statistic::ZTest(t) => t.p_value,
            Statistic::Model(f) => f.p_value,
        }
    }

    /// Direction used for routing: effect sign for z-tests, trend sign for models.
    pub fn sign(&self) -> Sign {
        match self {
            Statistic::ZTest(t) => t.effect_sign,
            Statistic::Model(f) => f.trend_sign,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Statistic::Model(f) if f.degenerate)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub target: Target,
    pub statistic: Statistic,
}

/// A summary network together with the inference behind it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpnResult {
    pub kind: SpnKind,
    /// Condition label for mean SPNs.
    pub condition: Option<String>,
    pub network: BinaryGraph,
    /// Vertices included by node-level analyses; empty for edge SPNs.
    pub flagged_nodes: Vec<usize>,
    /// Every tested hypothesis, in family order.
    pub hypotheses: Vec<Hypothesis>,
    pub correction: FdrDecision,
    /// Significant hypotheses with no trend direction, routed to neither sign.
    pub unsigned_significant: Vec<Target>,
    pub degenerate_fits: usize,
}

impl SpnResult {
    /// Members implied by the hypotheses and the correction alone.
    pub fn expected_members(&self) -> Vec<Target> {
        let wanted = self.kind.wanted_sign();
        self.hypotheses
            .iter()
            .zip(&self.correction.rejected)
            .filter(|(h, &r)| r && h.statistic.sign() == wanted)
            .map(|(h, _)| h.target)
            .collect()
    }

    /// Members actually present in the network or flagged node set.
    pub fn members(&self) -> Vec<Target> {
        match self.kind {
            SpnKind::NodeDifferentialPlus | SpnKind::NodeDifferentialMinus => self
                .flagged_nodes
                .iter()
                .map(|&v| Target::Node(v))
                .collect(),
            _ => self
                .network
                .edges()
                .into_iter()
                .map(|(i, j)| Target::Edge(i, j))
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.network.edge_count() == 0 && self.flagged_nodes.is_empty()
    }
}

fn check_base_rate(base_rate: f64) -> Result<()> {
    if !(base_rate > 0.0 && base_rate < 1.0) {
        return Err(Error::Domain(format!(
            "base rate must lie in (0, 1), got {base_rate}"
        )));
    }
    Ok(())
}

fn assemble(
    kind: SpnKind,
    condition: Option<String>,
    labels: &[String],
    hypotheses: Vec<Hypothesis>,
    correction: FdrDecision,
) -> Result<SpnResult> {
    let wanted = kind.wanted_sign();
    let mut edges = Vec::new();
    let mut nodes = Vec::new();
    let mut unsigned = Vec::new();
    for (h, &rejected) in hypotheses.iter().zip(&correction.rejected) {
        if !rejected {
            continue;
        }
        let sign = h.statistic.sign();
        if sign == Sign::Zero {
            unsigned.push(h.target);
        }
        if sign != wanted {
            continue;
        }
        match h.target {
            Target::Edge(i, j) => edges.push((i, j)),
            Target::Node(v) => nodes.push(v),
        }
    }
    let network = BinaryGraph::from_edges(labels.len(), edges)?.with_labels(labels.to_vec())?;
    Ok(SpnResult {
        kind,
        condition,
        network,
        flagged_nodes: nodes,
        degenerate_fits: hypotheses
            .iter()
            .filter(|h| h.statistic.is_degenerate())
            .count(),
        unsigned_significant: unsigned,
        hypotheses,
        correction,
    })
}

/// Mean SPN for one condition with FDR correction.
pub fn mean_spn(data: &StudyDataset, condition: usize, base_rate: f64) -> Result<SpnResult> {
    mean_spn_with(data, condition, base_rate, Correction::Fdr)
}

/// Mean SPN: each edge's Fisher-z values under `condition` are z-tested
/// against the grand mean and SD pooled over all edges, subjects and
/// conditions. Edges survive when corrected-significant and above the grand mean.
pub fn mean_spn_with(
    data: &StudyDataset,
    condition: usize,
    base_rate: f64,
    correction: Correction,
) -> Result<SpnResult> {
    check_base_rate(base_rate)?;
    if condition >= data.n_conditions() {
        return Err(Error::Domain(format!(
            "condition index {condition} out of range for {} conditions",
            data.n_conditions()
        )));
    }
    if data.n_subjects() < 2 {
        return Err(Error::InsufficientData(format!(
            "mean SPN needs at least 2 subjects, got {}",
            data.n_subjects()
        )));
    }
    let tables = data.fisher_tables()?;
    let pooled: Vec<f64> = tables.iter().flatten().flatten().copied().collect();
    let (grand_mean, grand_sd) = mean_sd(&pooled);

    let n_v = data.n_nodes();
    let pairs: Vec<(usize, usize)> = upper_pairs(n_v).collect();
    let hypotheses = pairs
        .par_iter()
        .enumerate()
        .map(|(e, &(i, j))| {
            let values: Vec<f64> = tables.iter().map(|row| row[condition][e]).collect();
            let test = if grand_sd > 0.0 {
                grand_mean_z_test(&values, grand_mean, grand_sd)?
            } else {
                // Every Fisher-z value equals the grand mean.
                TestResult {
                    statistic: 0.0,
                    p_value: 1.0,
                    effect_sign: Sign::Zero,
                    dof: (0.0, 0.0),
                }
            };
            Ok(Hypothesis {
                target: Target::Edge(i, j),
                statistic: Statistic::ZTest(test),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let p: Vec<f64> = hypotheses.iter().map(|h| h.statistic.p_value()).collect();
    let decision = correction.apply(&p, base_rate)?;
    assemble(
        SpnKind::Mean,
        Some(data.condition_labels()[condition].clone()),
        data.node_labels(),
        hypotheses,
        decision,
    )
}

/// Differential SPNs `(plus, minus)` with FDR correction.
pub fn differential_spn(data: &StudyDataset, base_rate: f64) -> Result<(SpnResult, SpnResult)> {
    differential_spn_with(data, base_rate, Correction::Fdr)
}

/// Differential SPNs: a repeated-measures F-test per edge over the whole
/// condition gradient, one correction over all edges, then routing of
/// significant edges by the sign of the linear trend.
pub fn differential_spn_with(
    data: &StudyDataset,
    base_rate: f64,
    correction: Correction,
) -> Result<(SpnResult, SpnResult)> {
    check_base_rate(base_rate)?;
    check_design(data.n_subjects(), data.n_conditions())?;
    let tables = data.fisher_tables()?;
    let pairs: Vec<(usize, usize)> = upper_pairs(data.n_nodes()).collect();
    debug_assert_eq!(pairs.len(), pair_count(data.n_nodes()));
    let hypotheses = pairs
        .par_iter()
        .enumerate()
        .map(|(e, &(i, j))| {
            let table: Vec<Vec<f64>> = tables
                .iter()
                .map(|row| row.iter().map(|cell| cell[e]).collect())
                .collect();
            Ok(Hypothesis {
                target: Target::Edge(i, j),
                statistic: Statistic::Model(repeated_measures_fit(&table)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    split_by_sign(
        hypotheses,
        correction,
        base_rate,
        data.node_labels(),
        (SpnKind::DifferentialPlus, SpnKind::DifferentialMinus),
    )
}

/// Node-level differential SPNs `(upweighted, downweighted)` with FDR correction.
pub fn node_differential_spn(
    data: &NodeSignalDataset,
    base_rate: f64,
) -> Result<(SpnResult, SpnResult)> {
    node_differential_spn_with(data, base_rate, Correction::Fdr)
}

/// The differential model applied to each vertex's intensity signal.
pub fn node_differential_spn_with(
    data: &NodeSignalDataset,
    base_rate: f64,
    correction: Correction,
) -> Result<(SpnResult, SpnResult)> {
    check_base_rate(base_rate)?;
    check_design(data.n_subjects(), data.n_conditions())?;
    let hypotheses = (0..data.n_nodes())
        .into_par_iter()
        .map(|v| {
            let table: Vec<Vec<f64>> = data
                .signals
                .iter()
                .map(|row| row.iter().map(|cell| cell[v]).collect())
                .collect();
            Ok(Hypothesis {
                target: Target::Node(v),
                statistic: Statistic::Model(repeated_measures_fit(&table)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    split_by_sign(
        hypotheses,
        correction,
        base_rate,
        data.node_labels(),
        (
            SpnKind::NodeDifferentialPlus,
            SpnKind::NodeDifferentialMinus,
        ),
    )
}

fn check_design(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "differential SPN needs at least 2 subjects, got {n}"
        )));
    }
    if k < 2 {
        return Err(Error::InsufficientData(format!(
            "differential SPN needs at least 2 conditions, got {k}"
        )));
    }
    Ok(())
}

fn split_by_sign(
    hypotheses: Vec<Hypothesis>,
    correction: Correction,
    base_rate: f64,
    labels: &[String],
    kinds: (SpnKind, SpnKind),
) -> Result<(SpnResult, SpnResult)> {
    let p: Vec<f64> = hypotheses.iter().map(|h| h.statistic.p_value()).collect();
    let decision = correction.apply(&p, base_rate)?;
    let plus = assemble(kinds.0, None, labels, hypotheses.clone(), decision.clone())?;
    let minus = assemble(kinds.1, None, labels, hypotheses, decision)?;
    Ok((plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn dataset(cells: Vec<Vec<SquareMatrix>>) -> StudyDataset {
        let n = cells.len();
        let k = cells[0].len();
        let v = cells[0][0].n();
        StudyDataset::new(cells, labels("n", v), labels("c", k), labels("s", n)).unwrap()
    }

    #[test]
    fn rejects_out_of_range_and_ragged() {
        let bad = SquareMatrix::constant_hollow(3, 1.5);
        let err = StudyDataset::new(
            vec![vec![bad]],
            labels("n", 3),
            labels("c", 1),
            labels("s", 1),
        );
        assert!(matches!(err, Err(Error::Validation(_))));

        let ok = SquareMatrix::constant_hollow(3, 0.5);
        let err = StudyDataset::new(
            vec![vec![ok.clone(), ok.clone()], vec![ok]],
            labels("n", 3),
            labels("c", 2),
            labels("s", 2),
        );
        assert!(matches!(err, Err(Error::UnsupportedDesign(_))));
    }

    #[test]
    fn constant_dataset_gives_empty_spns() {
        let m = SquareMatrix::constant_hollow(4, 0.3);
        let data = dataset(vec![vec![m.clone(), m.clone()]; 3]);
        let spn = mean_spn(&data, 0, 0.05).unwrap();
        assert!(spn.is_empty());
        let (plus, minus) = differential_spn(&data, 0.05).unwrap();
        assert!(plus.is_empty() && minus.is_empty());
    }

    #[test]
    fn insufficient_subjects() {
        let m = SquareMatrix::constant_hollow(3, 0.3);
        let data = dataset(vec![vec![m.clone(), m]]);
        assert!(matches!(
            mean_spn(&data, 0, 0.05),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            differential_spn(&data, 0.05),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(mean_spn(&data, 5, 0.05), Err(Error::Domain(_))));
    }

    #[test]
    fn node_signals_validated() {
        let err = NodeSignalDataset::new(
            vec![vec![vec![1.0, 2.0]], vec![vec![1.0]]],
            labels("n", 2),
            labels("c", 1),
            labels("s", 2),
        );
        assert!(matches!(err, Err(Error::Schema(_))));
    }
}
