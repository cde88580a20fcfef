//! Ridge-regularized logistic regression over standardized features,
//! fitted by Newton's method. An alternative head to the tree over the
//! same feature matrix.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_input, Error, Result};
use crate::pointcloud::Structure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    pub bias: f64,
    pub weights: Vec<f64>,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

const RIDGE: f64 = 1e-3;
const MAX_ITER: usize = 100;

/// Solves `a x = b` for a small dense SPD system (Gaussian elimination with
/// partial pivoting).
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::Numerical("singular Newton system".into()));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Ok(x)
}

/// P(FCC | features).
pub fn logistic_probability(model: &LogisticModel, features: &[f64]) -> f64 {
    let z = model.bias
        + features
            .iter()
            .zip(&model.weights)
            .zip(model.mean.iter().zip(&model.scale))
            .map(|((x, w), (m, s))| w * (x - m) / s)
            .sum::<f64>();
    1.0 / (1.0 + (-z).exp())
}

pub fn logistic_predict(model: &LogisticModel, features: &[f64]) -> Structure {
    if logistic_probability(model, features) > 0.5 {
        Structure::Fcc
    } else {
        Structure::Bcc
    }
}

pub fn train_logistic(x: &[Vec<f64>], y: &[Structure]) -> Result<LogisticModel> {
    if x.is_empty() || x.len() != y.len() {
        return Err(invalid_input("logistic regression needs equally many nonempty rows and labels"));
    }
    let d = x[0].len();
    let n = x.len() as f64;
    let mean: Vec<f64> = (0..d).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let scale: Vec<f64> = (0..d)
        .map(|j| {
            let v = x.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
            if v > 0.0 {
                v.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let z: Vec<Vec<f64>> = x
        .iter()
        .map(|r| {
            std::iter::once(1.0)
                .chain(r.iter().enumerate().map(|(j, v)| (v - mean[j]) / scale[j]))
                .collect()
        })
        .collect();
    let t: Vec<f64> = y.iter().map(|&l| if l == Structure::Fcc { 1.0 } else { 0.0 }).collect();

    let k = d + 1;
    let mut beta = vec![0.0; k];
    for _ in 0..MAX_ITER {
        let mut grad = vec![0.0; k];
        let mut hess = vec![vec![0.0; k]; k];
        for (zi, ti) in z.iter().zip(&t) {
            let eta: f64 = zi.iter().zip(&beta).map(|(a, b)| a * b).sum();
            let p = 1.0 / (1.0 + (-eta).exp());
            let w = p * (1.0 - p);
            for a in 0..k {
                grad[a] += (p - ti) * zi[a];
                for b in 0..k {
                    hess[a][b] += w * zi[a] * zi[b];
                }
            }
        }
        for a in 1..k {
            grad[a] += RIDGE * beta[a];
            hess[a][a] += RIDGE;
        }
        hess[0][0] += 1e-12;
        let step = solve(hess, grad)?;
        let mut max_step: f64 = 0.0;
        for (b, s) in beta.iter_mut().zip(&step) {
            *b -= s;
            max_step = max_step.max(s.abs());
        }
        if max_step < 1e-10 {
            break;
        }
    }
    Ok(LogisticModel {
        bias: beta[0],
        weights: beta[1..].to_vec(),
        mean,
        scale,
    })
}
