//! Edgewise and nodewise inference primitives.

pub mod distributions;
mod fdr;
mod repeated;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fdr::{bh_fdr, Correction, FdrDecision};
pub use repeated::{repeated_measures_fit, trend_contrast, EdgeModelFit};

/// Direction of an effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn reversed(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Sign, String> {
        match v {
            -1 => Ok(Sign::Negative),
            0 => Ok(Sign::Zero),
            1 => Ok(Sign::Positive),
            other => Err(format!("invalid sign {other}")),
        }
    }
}

/// Outcome of a single hypothesis test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub effect_sign: Sign,
    /// Numerator and denominator degrees of freedom; `(0, 0)` for z-tests.
    pub dof: (f64, f64),
}

/// Fisher variance-stabilizing transform `atanh(r)`.
pub fn fisher_z(r: f64) -> Result<f64> {
    if r.is_nan() || r.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "Fisher z-transform needs |r| < 1, got {r}"
        )));
    }
    // evaluated on |r| so the transform is exactly odd
    Ok(r.abs().atanh().copysign(r))
}

/// Inverse of [`fisher_z`].
pub fn inverse_fisher_z(z: f64) -> f64 {
    z.tanh()
}

/// Two-sided z-test of the mean of `values` against a pooled grand mean
/// and standard deviation.
pub fn grand_mean_z_test(values: &[f64], grand_mean: f64, grand_sd: f64) -> Result<TestResult> {
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "z-test needs at least 2 values, got {}",
            values.len()
        )));
    }
    if grand_sd.is_nan() || grand_sd <= 0.0 || grand_sd.is_infinite() {
        return Err(Error::Domain(format!(
            "grand standard deviation must be positive, got {grand_sd}"
        )));
    }
    let n = values.len() as f64;
    let diff = values.iter().sum::<f64>() / n - grand_mean;
    let statistic = diff / (grand_sd / n.sqrt());
    Ok(TestResult {
        statistic,
        p_value: distributions::normal_two_sided_p(statistic),
        effect_sign: Sign::of(diff),
        dof: (0.0, 0.0),
    })
}

/// Sample mean and unbiased standard deviation.
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}
