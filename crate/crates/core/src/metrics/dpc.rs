//! The cardinality-penalized diagram distance `d_p^c`.
//!
//! For diagrams `X`, `Y` with `n = |X| <= m = |Y|`:
//!
//! ```text
//! d_p^c(X, Y) = ( (1/m) * ( min_pi sum_l min(c, |x_l - y_pi(l)|_inf)^p + c^p (m - n) ) )^(1/p)
//! ```
//!
//! Points are never matched to the diagonal; every unmatched point of the
//! larger diagram costs exactly `c^p`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::metrics::assignment::{assignment_solve, CostMatrix, Matching};
use crate::metrics::{check_finite, linf};
use crate::rips::PersistenceDiagram;

/// Exponent `p >= 1` and cutoff `c > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpcParams {
    p: f64,
    c: f64,
}

impl DpcParams {
    pub fn new(p: f64, c: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(invalid_param(format!("p must satisfy 1 <= p < inf, got {p}")));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(invalid_param(format!("c must be positive and finite, got {c}")));
        }
        Ok(DpcParams { p, c })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `c^p`, the price of one unmatched point.
    pub fn penalty(&self) -> f64 {
        self.c.powf(self.p)
    }
}

/// Optimal capped matching between two diagrams, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct DpcMatching {
    /// Cardinality of the smaller diagram.
    pub n: usize,
    /// Cardinality of the larger diagram.
    pub m: usize,
    /// `min_pi sum_l min(c, |x_l - y_pi(l)|)^p`.
    pub matched_cost: f64,
    /// Indices into the smaller diagram -> larger diagram; empty when `n = 0`.
    pub matching: Option<Matching>,
    /// True when the arguments were swapped so that rows index `Y`.
    pub swapped: bool,
}

impl DpcMatching {
    /// `matched_cost + c^p (m - n)`: the bracket of the formula before the
    /// division by `m`.
    pub fn unnormalized(&self, params: &DpcParams) -> f64 {
        self.matched_cost + params.penalty() * (self.m - self.n) as f64
    }

    pub fn distance(&self, params: &DpcParams) -> f64 {
        if self.m == 0 {
            return 0.0;
        }
        (self.unnormalized(params) / self.m as f64).powf(1.0 / params.p())
    }
}

pub(crate) fn lex_cmp(a: &PersistenceDiagram, b: &PersistenceDiagram) -> std::cmp::Ordering {
    let key = |d: &PersistenceDiagram| d.pairs().iter().map(|p| (p.birth, p.death)).collect::<Vec<_>>();
    let (ka, kb) = (key(a), key(b));
    for (x, y) in ka.iter().zip(&kb) {
        let o = x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1));
        if o.is_ne() {
            return o;
        }
    }
    ka.len().cmp(&kb.len())
}

/// Solves the inner minimization of `d_p^c`. The smaller diagram indexes the
/// rows; on equal sizes the lexicographically smaller one does, so the
/// result does not depend on argument order.
pub fn dpc_matching(x: &PersistenceDiagram, y: &PersistenceDiagram, params: &DpcParams) -> Result<DpcMatching> {
    check_finite(x)?;
    check_finite(y)?;
    let swapped = match x.len().cmp(&y.len()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => lex_cmp(x, y).is_gt(),
    };
    let (small, large) = if swapped { (y, x) } else { (x, y) };
    let (n, m) = (small.len(), large.len());
    if n == 0 {
        return Ok(DpcMatching {
            n,
            m,
            matched_cost: 0.0,
            matching: None,
            swapped,
        });
    }
    let (c, p) = (params.c(), params.p());
    let cost = CostMatrix::from_fn(n, m, |i, j| linf(&small.pairs()[i], &large.pairs()[j]).min(c).powf(p));
    let matching = assignment_solve(&cost)?;
    Ok(DpcMatching {
        n,
        m,
        matched_cost: matching.total_cost,
        matching: Some(matching),
        swapped,
    })
}

/// `d_p^c(X, Y)`. Both diagrams must be free of essential classes. Two
/// empty diagrams are at distance 0; an empty and a nonempty one at `c`.
pub fn dpc_distance(x: &PersistenceDiagram, y: &PersistenceDiagram, params: &DpcParams) -> Result<f64> {
    Ok(dpc_matching(x, y, params)?.distance(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(1, pairs).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(DpcParams::new(0.5, 1.0).is_err());
        assert!(DpcParams::new(1.0, 0.0).is_err());
        assert!(DpcParams::new(f64::INFINITY, 1.0).is_err());
        assert!(DpcParams::new(2.0, 0.1).is_ok());
    }

    #[test]
    fn identity_is_zero() {
        let x = pd(&[(0.0, 1.0), (0.3, 0.9), (0.2, 2.0)]);
        let params = DpcParams::new(2.0, 0.5).unwrap();
        assert_eq!(dpc_distance(&x, &x, &params).unwrap(), 0.0);
    }

    #[test]
    fn one_extra_point() {
        // matched cost 0, one unmatched point at c = 0.5, divided by m = 2
        let x = pd(&[(0.0, 1.0)]);
        let y = pd(&[(0.0, 1.0), (0.0, 2.0)]);
        let params = DpcParams::new(1.0, 0.5).unwrap();
        assert_eq!(dpc_distance(&x, &y, &params).unwrap(), 0.25);
        assert_eq!(dpc_distance(&y, &x, &params).unwrap(), 0.25);
    }

    #[test]
    fn empty_conventions() {
        let params = DpcParams::new(2.0, 0.7).unwrap();
        let e = pd(&[]);
        assert_eq!(dpc_distance(&e, &e, &params).unwrap(), 0.0);
        let y = pd(&[(0.0, 1.0), (0.5, 0.6)]);
        assert!((dpc_distance(&e, &y, &params).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn rejects_essential_classes() {
        let params = DpcParams::new(2.0, 0.7).unwrap();
        let x = PersistenceDiagram::from_pairs(0, &[(0.0, f64::INFINITY)]).unwrap();
        assert!(dpc_distance(&x, &x, &params).is_err());
    }

    #[test]
    fn cap_applies_per_pair() {
        let x = pd(&[(0.0, 1.0)]);
        let y = pd(&[(0.0, 5.0)]);
        let params = DpcParams::new(1.0, 0.3).unwrap();
        assert!((dpc_distance(&x, &y, &params).unwrap() - 0.3).abs() < 1e-15);
    }
}
