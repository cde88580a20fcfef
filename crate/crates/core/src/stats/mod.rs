//! Cardinality statistics: hole-count bounds, heteroscedastic regression of
//! hole counts on point counts, and the probabilistic `d_p^c` bound built
//! from its prediction intervals.

pub mod bounds;
pub mod heteroscedasticity;
pub mod special;
pub mod wls;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metrics::dpc::{dpc_matching, DpcParams};
use crate::rips::PersistenceDiagram;

pub use bounds::{b1_upper_bound, construct_hole_config, per_scale_hole_bound, KissingNumber};
pub use heteroscedasticity::{breusch_pagan, BreuschPagan};
pub use wls::{
    prediction_interval, wls_fit, wls_fit_weighted, wls_fit_xy, CardinalityRecord, PredictionInterval, PredictorTransform, WeightRule,
    WlsFit,
};

/// The upper bound on the dimension-1 distance next to the quantity it
/// bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbabilisticBound {
    /// `(matched_cost + c^p · 2h)^(1/p)` with `h` the interval half-width.
    pub bound: f64,
    /// `(matched_cost + c^p · |m - n|)^(1/p)`, i.e. `m^(1/p) · d_p^c`.
    pub unnormalized: f64,
    /// The usual normalized `d_p^c`.
    pub normalized: f64,
    pub interval: PredictionInterval,
}

impl ProbabilisticBound {
    pub fn holds(&self) -> bool {
        self.unnormalized <= self.bound
    }
}

/// Upper bound on the dimension-1 `d_p^c` of two diagrams from the same
/// generating process: the cardinality gap is replaced by the length of the
/// `(1 - α)` prediction interval for `b1` at `mu = |X⁰|` points.
///
/// The bound carries no `1/m` normalization; compare it against
/// [`ProbabilisticBound::unnormalized`].
pub fn dpc_probabilistic_bound(
    x: &PersistenceDiagram,
    y: &PersistenceDiagram,
    fit: &WlsFit,
    mu: f64,
    alpha: f64,
    params: &DpcParams,
) -> Result<ProbabilisticBound> {
    let interval = prediction_interval(fit, mu, alpha)?;
    let matching = dpc_matching(x, y, params)?;
    let inv_p = 1.0 / params.p();
    let bound = (matching.matched_cost + params.penalty() * interval.length()).powf(inv_p);
    Ok(ProbabilisticBound {
        bound,
        unnormalized: matching.unnormalized(params).powf(inv_p),
        normalized: matching.distance(params),
        interval,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fit_with_scale(s: f64) -> WlsFit {
        WlsFit {
            gamma_hat: [0.0, 1.0],
            s,
            gram_inverse: [[1.0, 0.0], [0.0, 1.0]],
            n_obs: 10,
            transform: PredictorTransform::Identity,
            weights: WeightRule::InversePredictor,
        }
    }

    #[test]
    fn zero_scale_identical_diagrams() {
        let x = PersistenceDiagram::from_pairs(1, &[(0.2, 0.5), (0.3, 0.4)]).unwrap();
        let params = DpcParams::new(2.0, 0.1).unwrap();
        let b = dpc_probabilistic_bound(&x, &x, &fit_with_scale(0.0), 5.0, 0.05, &params).unwrap();
        assert_eq!(b.bound, 0.0);
        assert!(b.holds());
    }

    #[test]
    fn bound_is_penalty_times_interval_length() {
        let x = PersistenceDiagram::from_pairs(1, &[(0.2, 0.5)]).unwrap();
        let params = DpcParams::new(2.0, 0.3).unwrap();
        let fit = fit_with_scale(0.7);
        let b = dpc_probabilistic_bound(&x, &x, &fit, 4.0, 0.05, &params).unwrap();
        let h = prediction_interval(&fit, 4.0, 0.05).unwrap().half_width;
        assert!((b.bound - (0.09 * 2.0 * h).sqrt()).abs() < 1e-14);
    }
}
