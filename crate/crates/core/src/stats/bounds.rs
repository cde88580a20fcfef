//! Range of the number of 1-dimensional holes as a function of point count.
//!
//! Two bounds depend on the kissing number `K_d` of the ambient space: at
//! one scale a ρ-point Rips complex has at most `(K_d - 1) ρ` independent
//! loops, and over the whole filtration (at most ρ(ρ-1)/2 distinct edge
//! lengths) at most `½ (K_d - 1) ρ² (ρ - 1)` loops are ever born. Conversely
//! every count in `0..=⌊ρ/2⌋ - 1` is realized by a planar ladder
//! configuration, see [`construct_hole_config`].

use crate::error::{invalid_param, Result};
use crate::pointcloud::PointCloud;

/// Kissing number of the ambient Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KissingNumber(u64);

impl KissingNumber {
    /// The three-dimensional kissing number.
    pub const R3: KissingNumber = KissingNumber(12);

    /// Only `d = 3` is built in; other dimensions need [`KissingNumber::custom`].
    pub fn for_dimension(d: usize) -> Result<Self> {
        match d {
            3 => Ok(Self::R3),
            _ => Err(invalid_param(format!(
                "no built-in kissing number for dimension {d}; supply one explicitly"
            ))),
        }
    }

    pub fn custom(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(invalid_param("kissing number must be positive"));
        }
        Ok(KissingNumber(k))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn check_rho(rho: u64) -> Result<()> {
    if rho == 0 {
        return Err(invalid_param("point count must be positive"));
    }
    Ok(())
}

/// `⌊½ (K_d - 1) ρ² (ρ - 1)⌋`: largest possible size of the dimension-1
/// diagram of a ρ-point cloud.
pub fn b1_upper_bound(rho: u64, kissing: KissingNumber) -> Result<u64> {
    check_rho(rho)?;
    (kissing.0 - 1)
        .checked_mul(rho)
        .and_then(|v| v.checked_mul(rho))
        .and_then(|v| v.checked_mul(rho - 1))
        .map(|v| v / 2)
        .ok_or_else(|| invalid_param("b1 bound overflows u64"))
}

/// `(K_d - 1) ρ`: most independent 1-cycles at any single scale.
pub fn per_scale_hole_bound(rho: u64, kissing: KissingNumber) -> Result<u64> {
    check_rho(rho)?;
    (kissing.0 - 1)
        .checked_mul(rho)
        .ok_or_else(|| invalid_param("hole bound overflows u64"))
}

/// Largest hole count realized by [`construct_hole_config`] for ρ points.
pub fn constructive_max(rho: usize) -> Option<usize> {
    (rho / 2).checked_sub(1)
}

/// A planar ρ-point configuration (embedded at z = 0) whose Rips
/// dimension-1 diagram has exactly `target_b1` pairs.
///
/// `target_b1 = 0` places all points on a line with unit spacing. Otherwise
/// `2 (target_b1 + 1)` points form two parallel rows at unit spacing, a
/// ladder of `target_b1` unit squares (each born at 1, dying at √2), and
/// the remaining points continue the first row as a line.
pub fn construct_hole_config(rho: usize, target_b1: usize) -> Result<PointCloud> {
    let max = constructive_max(rho).ok_or_else(|| invalid_param(format!("no constructive configuration for {rho} points")))?;
    if target_b1 > max {
        return Err(invalid_param(format!(
            "target of {target_b1} holes exceeds the constructive maximum {max} for {rho} points"
        )));
    }
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(rho);
    if target_b1 == 0 {
        pts.extend((0..rho).map(|i| vec![i as f64, 0.0, 0.0]));
    } else {
        let rungs = target_b1 + 1;
        for i in 0..rungs {
            pts.push(vec![i as f64, 0.0, 0.0]);
            pts.push(vec![i as f64, 1.0, 0.0]);
        }
        let tail = rho - 2 * rungs;
        pts.extend((0..tail).map(|k| vec![(rungs + k) as f64, 0.0, 0.0]));
    }
    PointCloud::new(format!("holes-{rho}-{target_b1}"), &pts, None)
}
