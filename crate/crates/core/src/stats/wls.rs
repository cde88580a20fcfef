//! Weighted least squares of hole counts on point counts, with prediction
//! intervals for a new observation.
//!
//! The model is `b1 = γ0 + γ1 t(b0) + ε` with `Var(ε_i) ∝ t(b0_i)`, so the
//! weights are `1 / t(b0_i)`. For a new predictor value μ the interval is
//!
//! ```text
//! ŷ* ± t_{1-α/2, N-2} · s · sqrt( [1 t(μ)] (XᵀWX)⁻¹ [1 t(μ)]ᵀ + t(μ) )
//! ```
//!
//! where `s² = ε̂ᵀWε̂ / (N - 2)`. The trailing `t(μ)` is `1 / w*`, the
//! variance inflation of the new observation.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Error, Result};
use crate::stats::special::student_t_quantile;

/// `(b0, b1)` of one cloud: points and 1-dimensional holes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityRecord {
    pub id: String,
    pub b0: usize,
    pub b1: usize,
}

impl CardinalityRecord {
    pub fn new(id: impl Into<String>, b0: usize, b1: usize) -> Self {
        CardinalityRecord { id: id.into(), b0, b1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PredictorTransform {
    Identity,
    #[default]
    Square,
}

impl PredictorTransform {
    pub fn apply(self, b0: f64) -> f64 {
        match self {
            PredictorTransform::Identity => b0,
            PredictorTransform::Square => b0 * b0,
        }
    }

    pub fn invert(self, t: f64) -> f64 {
        match self {
            PredictorTransform::Identity => t,
            PredictorTransform::Square => t.max(0.0).sqrt(),
        }
    }
}

impl std::str::FromStr for PredictorTransform {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(PredictorTransform::Identity),
            "square" | "quadratic" => Ok(PredictorTransform::Square),
            _ => Err(invalid_param(format!("unknown predictor transform `{s}`"))),
        }
    }
}

/// How observations are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// `w_i = 1 / t(b0_i)`.
    #[default]
    InversePredictor,
    /// `w_i = 1`, i.e. ordinary least squares.
    Unit,
}

impl WeightRule {
    fn weight(self, x: f64) -> f64 {
        match self {
            WeightRule::InversePredictor => 1.0 / x,
            WeightRule::Unit => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WlsFit {
    /// `(intercept, slope)`.
    pub gamma_hat: [f64; 2],
    /// Residual scale with `N - 2` degrees of freedom.
    pub s: f64,
    /// `(XᵀWX)⁻¹`.
    pub gram_inverse: [[f64; 2]; 2],
    pub n_obs: usize,
    pub transform: PredictorTransform,
    pub weights: WeightRule,
}

impl WlsFit {
    pub fn predict(&self, b0: f64) -> f64 {
        self.gamma_hat[0] + self.gamma_hat[1] * self.transform.apply(b0)
    }

    /// Predictor value (raw units) at which the leverage term is smallest.
    pub fn leverage_center(&self) -> f64 {
        let g = &self.gram_inverse;
        self.transform.invert(-g[0][1] / g[1][1])
    }
}

/// Fits with weights `1 / t(b0)`.
pub fn wls_fit(records: &[CardinalityRecord], transform: PredictorTransform) -> Result<WlsFit> {
    wls_fit_weighted(records, transform, WeightRule::InversePredictor)
}

pub fn wls_fit_weighted(records: &[CardinalityRecord], transform: PredictorTransform, weights: WeightRule) -> Result<WlsFit> {
    let xs: Vec<f64> = records.iter().map(|r| transform.apply(r.b0 as f64)).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.b1 as f64).collect();
    fit_xy(&xs, &ys, transform, weights)
}

/// Fits real-valued responses `ys` on raw predictor values `b0s`.
pub fn wls_fit_xy(b0s: &[f64], ys: &[f64], transform: PredictorTransform, weights: WeightRule) -> Result<WlsFit> {
    if b0s.len() != ys.len() {
        return Err(invalid_param("predictor and response lengths differ"));
    }
    let xs: Vec<f64> = b0s.iter().map(|&b| transform.apply(b)).collect();
    fit_xy(&xs, ys, transform, weights)
}

pub(crate) fn fit_xy(xs: &[f64], ys: &[f64], transform: PredictorTransform, weights: WeightRule) -> Result<WlsFit> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "weighted least squares needs at least 3 observations (N - 2 degrees of freedom), got {n}"
        )));
    }
    if weights == WeightRule::InversePredictor && xs.iter().any(|&x| !(x > 0.0)) {
        return Err(invalid_param("inverse-predictor weights need positive predictor values"));
    }
    let first = xs[0];
    if xs.iter().all(|&x| x == first) {
        return Err(Error::Numerical("singular design: all predictor values are equal".into()));
    }

    let (mut sw, mut swx, mut swxx, mut swy, mut swxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let w = weights.weight(x);
        sw += w;
        swx += w * x;
        swxx += w * x * x;
        swy += w * y;
        swxy += w * x * y;
    }
    // Centered form of the determinant avoids cancellation for large x.
    let xbar = swx / sw;
    let sxx: f64 = xs.iter().map(|&x| weights.weight(x) * (x - xbar) * (x - xbar)).sum();
    let det = sw * sxx;
    if !(det > 0.0) || !det.is_finite() {
        return Err(Error::Numerical("singular weighted design matrix".into()));
    }
    let gram_inverse = [[swxx / det, -swx / det], [-swx / det, sw / det]];
    let slope = (swxy - xbar * swy) / sxx;
    let intercept = swy / sw - slope * xbar;

    let ssr: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - intercept - slope * x;
            weights.weight(x) * e * e
        })
        .sum();
    let s = (ssr / (n - 2) as f64).sqrt();
    Ok(WlsFit {
        gamma_hat: [intercept, slope],
        s,
        gram_inverse,
        n_obs: n,
        transform,
        weights,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionInterval {
    pub center: f64,
    pub half_width: f64,
    pub level: f64,
}

impl PredictionInterval {
    pub fn lower(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn upper(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn length(&self) -> f64 {
        2.0 * self.half_width
    }

    pub fn contains(&self, y: f64) -> bool {
        (y - self.center).abs() <= self.half_width
    }
}

/// Two-sided `(1 - α)` prediction interval for the hole count of a new
/// cloud with `mu` points.
pub fn prediction_interval(fit: &WlsFit, mu: f64, alpha: f64) -> Result<PredictionInterval> {
    if fit.n_obs <= 2 {
        return Err(Error::InsufficientData(format!(
            "prediction interval undefined with {} observations (N - 2 degrees of freedom)",
            fit.n_obs
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid_param(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(invalid_param(format!("predictor value must be positive, got {mu}")));
    }
    let x = fit.transform.apply(mu);
    let g = &fit.gram_inverse;
    let leverage = g[0][0] + 2.0 * g[0][1] * x + g[1][1] * x * x;
    let new_obs_var = 1.0 / fit.weights.weight(x);
    let tq = student_t_quantile(1.0 - alpha / 2.0, (fit.n_obs - 2) as f64)?;
    let half_width = tq * fit.s * (leverage + new_obs_var).max(0.0).sqrt();
    Ok(PredictionInterval {
        center: fit.predict(mu),
        half_width,
        level: 1.0 - alpha,
    })
}
