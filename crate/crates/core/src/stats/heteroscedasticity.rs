use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::special::chi_squared_sf;
use crate::stats::wls::{fit_xy, CardinalityRecord, PredictorTransform, WeightRule};

/// Result of the Breusch–Pagan test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BreuschPagan {
    /// LM statistic `N · R²` of the auxiliary regression.
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Breusch–Pagan test of `b1` against `t(b0)`.
///
/// Squared OLS residuals are regressed on the same predictor; under
/// homoscedasticity `N · R²` is asymptotically χ²(1).
pub fn breusch_pagan(records: &[CardinalityRecord], transform: PredictorTransform) -> Result<BreuschPagan> {
    let xs: Vec<f64> = records.iter().map(|r| transform.apply(r.b0 as f64)).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.b1 as f64).collect();
    breusch_pagan_xy(&xs, &ys)
}

/// Breusch–Pagan on raw `(x, y)` observations.
pub fn breusch_pagan_xy(xs: &[f64], ys: &[f64]) -> Result<BreuschPagan> {
    let n = xs.len();
    if n < 5 {
        return Err(Error::InsufficientData(format!(
            "Breusch-Pagan needs at least 5 observations, got {n}"
        )));
    }
    let ols = fit_xy(xs, ys, PredictorTransform::Identity, WeightRule::Unit)?;
    let sq: Vec<f64> = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - ols.gamma_hat[0] - ols.gamma_hat[1] * x;
            e * e
        })
        .collect();
    let aux = fit_xy(xs, &sq, PredictorTransform::Identity, WeightRule::Unit)?;
    let mean = sq.iter().sum::<f64>() / n as f64;
    let sst: f64 = sq.iter().map(|v| (v - mean) * (v - mean)).sum();
    let statistic = if sst > 0.0 {
        let ssr: f64 = xs
            .iter()
            .zip(&sq)
            .map(|(&x, &v)| {
                let e = v - aux.gamma_hat[0] - aux.gamma_hat[1] * x;
                e * e
            })
            .sum();
        n as f64 * (1.0 - ssr / sst).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(BreuschPagan {
        statistic,
        dof: 1,
        p_value: chi_squared_sf(statistic, 1.0)?,
    })
}
