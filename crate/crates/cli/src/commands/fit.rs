use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};
use topoclass::io::{format_f64, read_records, write_json};
use topoclass::stats::{breusch_pagan, prediction_interval, wls_fit_weighted, BreuschPagan, PredictorTransform, WeightRule, WlsFit};

use crate::config::{existing, parse_serde, Globals};
use crate::report::emit;

/// Weighted least-squares fit of `b1` on `t(b0)` from a records CSV, with
/// a Breusch–Pagan check and an optional prediction band for plotting.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitArgs {
    /// Cardinality records CSV (`id,b0,b1`).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// square or identity.
    #[arg(long, value_parser = parse_serde::<PredictorTransform>)]
    pub transform: Option<PredictorTransform>,
    /// inverse_predictor or unit.
    #[arg(long, value_parser = parse_serde::<WeightRule>)]
    pub weights: Option<WeightRule>,
    /// Prediction intervals have level 1 - alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Writes `b0,fit,lower,upper` rows for every integer b0 in range.
    #[arg(long)]
    pub band: Option<PathBuf>,
    #[arg(long)]
    pub band_min: Option<usize>,
    #[arg(long)]
    pub band_max: Option<usize>,
    /// Writes the full fit as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Serialize)]
struct Row {
    n: usize,
    intercept: f64,
    slope: f64,
    s: f64,
    transform: PredictorTransform,
    weights: WeightRule,
    bp_statistic: Option<f64>,
    bp_p_value: Option<f64>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct FitFile<'a> {
    fit: &'a WlsFit,
    breusch_pagan: Option<BreuschPagan>,
    seed: Option<u64>,
}

pub fn run(a: &FitArgs, g: &Globals) -> anyhow::Result<()> {
    let input = existing(a.input.as_ref(), "input")?;
    let transform = a.transform.unwrap_or_default();
    let alpha = a.alpha.unwrap_or(DEFAULT_ALPHA);
    let records = read_records(&input)?;
    let fit = wls_fit_weighted(&records, transform, a.weights.unwrap_or_default())?;
    let bp = if records.len() >= 5 {
        Some(breusch_pagan(&records, transform)?)
    } else {
        None
    };

    if let Some(path) = &a.band {
        let lo = a.band_min.unwrap_or_else(|| records.iter().map(|r| r.b0).min().unwrap_or(1)).max(1);
        let hi = a.band_max.unwrap_or_else(|| records.iter().map(|r| r.b0).max().unwrap_or(1));
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(w, "b0,fit,lower,upper")?;
        for b0 in lo..=hi {
            let pi = prediction_interval(&fit, b0 as f64, alpha)?;
            writeln!(w, "{b0},{},{},{}", format_f64(pi.center), format_f64(pi.lower()), format_f64(pi.upper()))?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.out {
        write_json(
            path,
            &FitFile {
                fit: &fit,
                breusch_pagan: bp,
                seed: g.seed,
            },
        )?;
    }
    emit(
        &[Row {
            n: fit.n_obs,
            intercept: fit.gamma_hat[0],
            slope: fit.gamma_hat[1],
            s: fit.s,
            transform,
            weights: fit.weights,
            bp_statistic: bp.map(|b| b.statistic),
            bp_p_value: bp.map(|b| b.p_value),
            seed: g.seed,
        }],
        g.format,
    )
}
