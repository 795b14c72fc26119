//! Synthetic study datasets with planted effects.
//!
//! Fisher-z values are drawn as `baseline + subject intercept + planted
//! effect + noise` and mapped back to correlations with `tanh`, so the
//! generative model matches the one the SPN tests assume.

use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::generators::rng_from_seed;
use crate::matrix::{upper_pairs, SquareMatrix};
use crate::spn::{NodeSignalDataset, StudyDataset};

/// An additive Fisher-z shift on one edge (or node), per condition.
#[derive(Clone, Debug, PartialEq)]
pub struct PlantedEffect {
    pub target: (usize, usize),
    pub shift: Vec<f64>,
}

impl PlantedEffect {
    /// Same shift in every condition.
    pub fn constant(i: usize, j: usize, shift: f64, conditions: usize) -> Self {
        Self {
            target: (i, j),
            shift: vec![shift; conditions],
        }
    }

    /// Shift rising linearly from 0 to `total` across the conditions
    /// (falling if `total` is negative).
    pub fn linear(i: usize, j: usize, total: f64, conditions: usize) -> Self {
        let step = if conditions > 1 {
            total / (conditions - 1) as f64
        } else {
            0.0
        };
        Self {
            target: (i, j),
            shift: (0..conditions).map(|c| c as f64 * step).collect(),
        }
    }

    /// Shift applied in one condition only.
    pub fn single(i: usize, j: usize, condition: usize, shift: f64, conditions: usize) -> Self {
        let mut s = vec![0.0; conditions];
        s[condition] = shift;
        Self {
            target: (i, j),
            shift: s,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticDesign {
    pub nodes: usize,
    pub subjects: usize,
    pub conditions: usize,
    pub baseline_z: f64,
    pub subject_sd: f64,
    pub noise_sd: f64,
    pub planted: Vec<PlantedEffect>,
}

impl SyntheticDesign {
    pub fn new(nodes: usize, subjects: usize, conditions: usize) -> Self {
        Self {
            nodes,
            subjects,
            conditions,
            baseline_z: 0.0,
            subject_sd: 0.1,
            noise_sd: 0.2,
            planted: Vec::new(),
        }
    }

    pub fn with_noise(mut self, subject_sd: f64, noise_sd: f64) -> Self {
        self.subject_sd = subject_sd;
        self.noise_sd = noise_sd;
        self
    }

    pub fn with_baseline(mut self, baseline_z: f64) -> Self {
        self.baseline_z = baseline_z;
        self
    }

    pub fn plant(mut self, effect: PlantedEffect) -> Self {
        self.planted.push(effect);
        self
    }

    fn check(&self) -> Result<()> {
        for p in &self.planted {
            let (i, j) = p.target;
            if i >= self.nodes || j >= self.nodes || p.shift.len() != self.conditions {
                return Err(Error::Validation(format!(
                    "planted effect at ({i}, {j}) does not fit the design"
                )));
            }
        }
        if !(self.subject_sd >= 0.0 && self.noise_sd >= 0.0) {
            return Err(Error::Validation("noise levels must be nonnegative".into()));
        }
        Ok(())
    }

    fn shift_table(
        &self,
        key: impl Fn((usize, usize)) -> Option<usize>,
        len: usize,
    ) -> Vec<Vec<f64>> {
        let mut table = vec![vec![0.0; self.conditions]; len];
        for p in &self.planted {
            if let Some(idx) = key(p.target) {
                for (t, s) in table[idx].iter_mut().zip(&p.shift) {
                    *t += s;
                }
            }
        }
        table
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Draws a correlation-matrix dataset from `design`.
#[allow(clippy::needless_range_loop)]
pub fn simulate_dataset(design: &SyntheticDesign, seed: u64) -> Result<StudyDataset> {
    design.check()?;
    let pairs: Vec<(usize, usize)> = upper_pairs(design.nodes).collect();
    let shifts = design.shift_table(
        |(i, j)| {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            pairs.iter().position(|&p| p == (a, b))
        },
        pairs.len(),
    );
    let mut rng = rng_from_seed(seed);
    let subject_noise =
        Normal::new(0.0, design.subject_sd).map_err(|e| Error::Validation(e.to_string()))?;
    let cell_noise =
        Normal::new(0.0, design.noise_sd).map_err(|e| Error::Validation(e.to_string()))?;

    let mut cells = Vec::with_capacity(design.subjects);
    for _ in 0..design.subjects {
        let intercepts: Vec<f64> = pairs
            .iter()
            .map(|_| subject_noise.sample(&mut rng))
            .collect();
        let mut row = Vec::with_capacity(design.conditions);
        for c in 0..design.conditions {
            let upper: Vec<f64> = (0..pairs.len())
                .map(|e| {
                    let z = design.baseline_z
                        + intercepts[e]
                        + shifts[e][c]
                        + cell_noise.sample(&mut rng);
                    z.tanh()
                })
                .collect();
            row.push(SquareMatrix::from_upper_triangle(design.nodes, &upper)?);
        }
        cells.push(row);
    }
    StudyDataset::new(
        cells,
        labels("n", design.nodes),
        labels("c", design.conditions),
        labels("s", design.subjects),
    )
}

/// Draws node intensity signals from `design`; planted targets use the
/// first index of the pair as the vertex.
pub fn simulate_node_signals(design: &SyntheticDesign, seed: u64) -> Result<NodeSignalDataset> {
    design.check()?;
    let shifts = design.shift_table(|(v, _)| Some(v), design.nodes);
    let mut rng = rng_from_seed(seed);
    let subject_noise =
        Normal::new(0.0, design.subject_sd).map_err(|e| Error::Validation(e.to_string()))?;
    let cell_noise =
        Normal::new(0.0, design.noise_sd).map_err(|e| Error::Validation(e.to_string()))?;
    let mut signals = Vec::with_capacity(design.subjects);
    for _ in 0..design.subjects {
        let intercepts: Vec<f64> = (0..design.nodes)
            .map(|_| subject_noise.sample(&mut rng))
            .collect();
        let row = (0..design.conditions)
            .map(|c| {
                (0..design.nodes)
                    .map(|v| {
                        design.baseline_z
                            + intercepts[v]
                            + shifts[v][c]
                            + cell_noise.sample(&mut rng)
                    })
                    .collect()
            })
            .collect();
        signals.push(row);
    }
    NodeSignalDataset::new(
        signals,
        labels("n", design.nodes),
        labels("c", design.conditions),
        labels("s", design.subjects),
    )
}
