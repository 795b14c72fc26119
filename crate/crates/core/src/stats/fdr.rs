use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiple-comparison handling for a family of hypotheses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    /// Benjamini-Hochberg step-up at the base rate.
    #[default]
    Fdr,
    /// Uncorrected: reject every `p <= base_rate`.
    None,
}

impl Correction {
    pub fn apply(self, p_values: &[f64], base_rate: f64) -> Result<FdrDecision> {
        match self {
            Correction::Fdr => bh_fdr(p_values, base_rate),
            Correction::None => {
                check_inputs(p_values, base_rate)?;
                let rejected: Vec<bool> = p_values.iter().map(|&p| p <= base_rate).collect();
                Ok(FdrDecision {
                    threshold_index: rejected.iter().filter(|&&r| r).count(),
                    rejected,
                    base_rate,
                })
            }
        }
    }
}

/// Rejection decisions for a family of hypotheses, in input order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdrDecision {
    pub rejected: Vec<bool>,
    /// Rank (1-based) of the largest p-value still rejected; 0 if none.
    pub threshold_index: usize,
    pub base_rate: f64,
}

impl FdrDecision {
    pub fn rejected_count(&self) -> usize {
        self.rejected.iter().filter(|&&r| r).count()
    }
}

fn check_inputs(p_values: &[f64], base_rate: f64) -> Result<()> {
    if !(base_rate > 0.0 && base_rate < 1.0) {
        return Err(Error::Domain(format!(
            "base rate must lie in (0, 1), got {base_rate}"
        )));
    }
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Domain(format!("p-value {p} outside [0, 1]")));
    }
    Ok(())
}

/// Benjamini-Hochberg step-up procedure.
///
/// Finds the largest rank `k` with `p_(k) <= k / m * base_rate` and rejects
/// every hypothesis whose p-value is at most `p_(k)`.
pub fn bh_fdr(p_values: &[f64], base_rate: f64) -> Result<FdrDecision> {
    check_inputs(p_values, base_rate)?;
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));

    let mut k = 0;
    for (rank, &idx) in order.iter().enumerate().rev() {
        if p_values[idx] <= (rank + 1) as f64 / m as f64 * base_rate {
            k = rank + 1;
            break;
        }
    }
    let mut rejected = vec![false; m];
    if k > 0 {
        let cutoff = p_values[order[k - 1]];
        for (r, &p) in rejected.iter_mut().zip(p_values) {
            *r = p <= cutoff;
        }
    }
    Ok(FdrDecision {
        threshold_index: k,
        rejected,
        base_rate,
    })
}
