//! Balanced repeated-measures model with fixed condition effects and a
//! random subject intercept, solved in closed form.
//!
//! For an `n x J` table `y[i][j]` (subject `i`, condition `j`) the total
//! variation splits into subject, condition and residual strata. The
//! condition F-test is `MS_condition / MS_residual` on `(J-1, (n-1)(J-1))`
//! degrees of freedom.

use serde::{Deserialize, Serialize};

use super::distributions::f_survival;
use super::Sign;
use crate::error::{Error, Result};

/// Fit of the per-edge (or per-node) repeated-measures model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeModelFit {
    /// Condition means, one per condition in gradient order.
    pub fixed_effects: Vec<f64>,
    /// Subject means minus the grand mean.
    pub subject_intercepts: Vec<f64>,
    /// Residual mean square.
    pub residual_variance: f64,
    pub f_statistic: f64,
    pub p_value: f64,
    pub dof: (f64, f64),
    /// Sign of the equally spaced linear contrast over the fixed effects.
    pub trend_sign: Sign,
    /// Residual mean square vanished, so F is 0 or infinite by convention.
    pub degenerate: bool,
}

/// Linear contrast `sum_j (j - (J+1)/2) * effects[j]` with 1-based `j`.
pub fn trend_contrast(effects: &[f64]) -> f64 {
    let centre = (effects.len() as f64 - 1.0) / 2.0;
    effects
        .iter()
        .enumerate()
        .map(|(j, &b)| (j as f64 - centre) * b)
        .sum()
}

fn trend_sign(effects: &[f64]) -> Sign {
    let centre = (effects.len() as f64 - 1.0) / 2.0;
    let scale: f64 = effects
        .iter()
        .enumerate()
        .map(|(j, &b)| ((j as f64 - centre) * b).abs())
        .sum();
    let c = trend_contrast(effects);
    if c.abs() <= 1e-12 * scale {
        Sign::Zero
    } else {
        Sign::of(c)
    }
}

/// Fits the random-intercept model to a complete table with subjects as rows.
pub fn repeated_measures_fit(values: &[Vec<f64>]) -> Result<EdgeModelFit> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "repeated-measures fit needs at least 2 subjects, got {n}"
        )));
    }
    let k = values[0].len();
    if k < 2 {
        return Err(Error::InsufficientData(format!(
            "repeated-measures fit needs at least 2 conditions, got {k}"
        )));
    }
    for (i, row) in values.iter().enumerate() {
        if row.len() != k {
            return Err(Error::UnsupportedDesign(format!(
                "subject {i} has {} cells, expected {k} (design must be balanced)",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::UnsupportedDesign(format!(
                "missing or non-finite cell at subject {i}, condition {j}"
            )));
        }
    }

    let (nf, kf) = (n as f64, k as f64);
    let condition_means: Vec<f64> = (0..k)
        .map(|j| values.iter().map(|row| row[j]).sum::<f64>() / nf)
        .collect();
    let subject_means: Vec<f64> = values
        .iter()
        .map(|row| row.iter().sum::<f64>() / kf)
        .collect();
    let all_equal = condition_means.iter().all(|&c| c == condition_means[0]);
    let grand = if all_equal {
        condition_means[0]
    } else {
        condition_means.iter().sum::<f64>() / kf
    };

    let ss_condition = if all_equal {
        0.0
    } else {
        nf * condition_means
            .iter()
            .map(|c| (c - grand) * (c - grand))
            .sum::<f64>()
    };
    let mut ss_residual = 0.0;
    let mut ss_total = 0.0;
    for (row, sm) in values.iter().zip(&subject_means) {
        for (y, cm) in row.iter().zip(&condition_means) {
            let r = y - sm - cm + grand;
            ss_residual += r * r;
            ss_total += (y - grand) * (y - grand);
        }
    }

    let df_condition = kf - 1.0;
    let df_residual = (nf - 1.0) * (kf - 1.0);
    let ms_condition = ss_condition / df_condition;
    let ms_residual = ss_residual / df_residual;

    let degenerate = ss_total == 0.0 || ss_residual <= 1e-20 * ss_total;
    let effect_vanishes = ss_total == 0.0 || ss_condition <= 1e-20 * ss_total;
    let (f_statistic, p_value) = if degenerate {
        if effect_vanishes {
            (0.0, 1.0)
        } else {
            (f64::INFINITY, 0.0)
        }
    } else {
        let f = ms_condition / ms_residual;
        (f, f_survival(f, df_condition, df_residual))
    };

    let trend = if effect_vanishes {
        Sign::Zero
    } else {
        trend_sign(&condition_means)
    };

    Ok(EdgeModelFit {
        subject_intercepts: subject_means.iter().map(|s| s - grand).collect(),
        fixed_effects: condition_means,
        residual_variance: if degenerate { 0.0 } else { ms_residual },
        f_statistic,
        p_value,
        dof: (df_condition, df_residual),
        trend_sign: trend,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_columns_give_null_fit() {
        let t = vec![
            vec![0.3, 0.3, 0.3],
            vec![-0.1, -0.1, -0.1],
            vec![0.7, 0.7, 0.7],
        ];
        let fit = repeated_measures_fit(&t).unwrap();
        assert_eq!(fit.f_statistic, 0.0);
        assert_eq!(fit.p_value, 1.0);
        assert_eq!(fit.trend_sign, Sign::Zero);
    }

    #[test]
    fn zero_residual_is_flagged() {
        let t = vec![vec![0.0, 1.0], vec![0.5, 1.5], vec![-0.2, 0.8]];
        let fit = repeated_measures_fit(&t).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.p_value, 0.0);
        assert!(fit.f_statistic.is_infinite());
        assert_eq!(fit.trend_sign, Sign::Positive);
        assert_eq!(fit.dof, (1.0, 2.0));
    }

    #[test]
    fn known_two_way_table() {
        // SS_cond = 152/15, SS_res = 38/15 on (2, 8) df, so F = 16.
        let t = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 3.0, 5.0],
            vec![3.0, 3.0, 4.0],
            vec![1.0, 3.0, 3.0],
            vec![2.0, 2.0, 4.0],
        ];
        let fit = repeated_measures_fit(&t).unwrap();
        let expected_f = 16.0;
        assert!((fit.f_statistic - expected_f).abs() < 1e-10);
        assert_eq!(fit.fixed_effects, vec![1.8, 2.6, 3.8]);
        assert_eq!(fit.trend_sign, Sign::Positive);
        // F(2, 8) tail at 16 is (1 + 2 * 16 / 8)^-4 = 5^-4
        assert!((fit.p_value - 0.0016).abs() < 1e-12);
    }

    #[test]
    fn unbalanced_rejected() {
        let t = vec![vec![1.0, 2.0], vec![1.0]];
        assert!(matches!(
            repeated_measures_fit(&t),
            Err(Error::UnsupportedDesign(_))
        ));
        let t = vec![vec![1.0, f64::NAN], vec![1.0, 2.0]];
        assert!(matches!(
            repeated_measures_fit(&t),
            Err(Error::UnsupportedDesign(_))
        ));
    }

    #[test]
    fn symmetric_effect_has_no_trend() {
        let t = vec![
            vec![0.0, 1.0, 0.0],
            vec![0.1, 1.2, 0.1],
            vec![-0.1, 0.9, 0.0],
        ];
        let fit = repeated_measures_fit(&t).unwrap();
        assert!(fit.p_value < 0.05);
        assert_eq!(
            trend_sign(&[0.0, 1.0, 0.0]),
            Sign::Zero,
            "contrast of a symmetric profile"
        );
    }
}
