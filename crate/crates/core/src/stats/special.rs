//! Special functions and the two reference distributions needed here:
//! Student's t (quantiles for prediction intervals) and chi-squared (upper
//! tail for the Breusch–Pagan statistic).

use crate::error::{invalid_param, Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos approximation, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

const FPMIN: f64 = 1e-300;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::Numerical("incomplete beta continued fraction did not converge".into()))
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(invalid_param("incomplete beta needs a, b > 0"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid_param("incomplete beta needs 0 <= x <= 1"));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(x);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_cf(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_cf(b, a, 1.0 - x)? / b)
    }
}

fn check_dof(dof: f64) -> Result<()> {
    if !(dof > 0.0 && dof.is_finite()) {
        return Err(invalid_param(format!("degrees of freedom must be positive, got {dof}")));
    }
    Ok(())
}

/// Student's t density.
pub fn student_t_pdf(t: f64, dof: f64) -> f64 {
    let ln_norm = ln_gamma(0.5 * (dof + 1.0)) - ln_gamma(0.5 * dof) - 0.5 * (dof * std::f64::consts::PI).ln();
    (ln_norm - 0.5 * (dof + 1.0) * (1.0 + t * t / dof).ln()).exp()
}

/// Student's t upper tail `P(T > t)` for `t >= 0`, computed without
/// cancellation.
fn student_t_upper(t: f64, dof: f64) -> Result<f64> {
    let x = dof / (dof + t * t);
    Ok(0.5 * incomplete_beta(0.5 * dof, 0.5, x)?)
}

/// Student's t CDF.
pub fn student_t_cdf(t: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if t.is_nan() {
        return Err(invalid_param("t is NaN"));
    }
    let tail = student_t_upper(t.abs(), dof)?;
    Ok(if t >= 0.0 { 1.0 - tail } else { tail })
}

/// Quantile of Student's t: the `t` with `P(T <= t) = prob`.
///
/// Safeguarded Newton iteration on the upper tail, bracketed by bisection,
/// converged to a relative step below 1e-14.
pub fn student_t_quantile(prob: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if !(prob > 0.0 && prob < 1.0) {
        return Err(invalid_param(format!("probability must lie in (0, 1), got {prob}")));
    }
    if prob == 0.5 {
        return Ok(0.0);
    }
    let upper = prob.min(1.0 - prob); // target P(T > t) for t >= 0
    let sign = if prob > 0.5 { 1.0 } else { -1.0 };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while student_t_upper(hi, dof)? > upper {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::Numerical("t quantile bracket overflow".into()));
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..500 {
        let f = student_t_upper(t, dof)? - upper; // decreasing in t
        if f > 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = -student_t_pdf(t, dof);
        let mut next = if slope != 0.0 { t - f / slope } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - t).abs();
        t = next;
        if step <= 1e-14 * t.abs().max(1e-300) || hi - lo <= 1e-15 * hi {
            return Ok(sign * t);
        }
    }
    Ok(sign * t)
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || x < 0.0 || x.is_nan() {
        return Err(invalid_param("upper incomplete gamma needs a > 0, x >= 0"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let gln = ln_gamma(a);
    if x < a + 1.0 {
        // series for P(a, x)
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * EPS {
                let p = sum * (-x + a * x.ln() - gln).exp();
                return Ok((1.0 - p).clamp(0.0, 1.0));
            }
        }
        Err(Error::Numerical("incomplete gamma series did not converge".into()))
    } else {
        // continued fraction for Q(a, x)
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / FPMIN;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < FPMIN {
                d = FPMIN;
            }
            c = b + an / c;
            if c.abs() < FPMIN {
                c = FPMIN;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(((-x + a * x.ln() - gln).exp() * h).clamp(0.0, 1.0));
            }
        }
        Err(Error::Numerical("incomplete gamma continued fraction did not converge".into()))
    }
}

/// Upper tail `P(X > x)` of the chi-squared distribution.
pub fn chi_squared_sf(x: f64, dof: f64) -> Result<f64> {
    check_dof(dof)?;
    if x <= 0.0 {
        return Ok(1.0);
    }
    upper_incomplete_gamma(0.5 * dof, 0.5 * x)
}
