//! Natural cubic spline interpolation as a linear map from knot values to samples.

use crate::error::{Error, Result};

/// Second derivatives of the natural spline through `(x, y)`.
fn second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior equations
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let a = h0 / 6.0;
        let b = (h0 + h1) / 3.0;
        let c = h1 / 6.0;
        let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        let denom = b - a * c_prime[i - 1];
        c_prime[i] = c / denom;
        d_prime[i] = (d - a * d_prime[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

fn evaluate(x: &[f64], y: &[f64], m: &[f64], t: f64) -> f64 {
    let n = x.len();
    if n == 1 {
        return y[0];
    }
    let mut k = match x.partition_point(|&xi| xi <= t) {
        0 => 0,
        p => p - 1,
    };
    if k >= n - 1 {
        k = n - 2;
    }
    let h = x[k + 1] - x[k];
    let a = (x[k + 1] - t) / h;
    let b = (t - x[k]) / h;
    a * y[k] + b * y[k + 1] + ((a * a * a - a) * m[k] + (b * b * b - b) * m[k + 1]) * h * h / 6.0
}

/// Weights `w[j][i]` such that the natural spline through knots `x` with values `y`
/// evaluates to `sum_i w[j][i] y[i]` at `targets[j]`.
pub fn spline_weights(knots: &[f64], targets: &[f64]) -> Result<Vec<Vec<f64>>> {
    if knots.is_empty() {
        return Err(Error::InvalidArgument("spline needs at least one knot".into()));
    }
    if knots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("spline knots must be strictly increasing".into()));
    }
    let n = knots.len();
    let mut w = vec![vec![0.0; n]; targets.len()];
    let mut unit = vec![0.0; n];
    for i in 0..n {
        unit.iter_mut().for_each(|u| *u = 0.0);
        unit[i] = 1.0;
        let m = second_derivatives(knots, &unit);
        for (j, &t) in targets.iter().enumerate() {
            w[j][i] = evaluate(knots, &unit, &m, t);
        }
    }
    Ok(w)
}

/// Evaluate the natural spline through `(knots, values)` at `t`.
pub fn natural_spline(knots: &[f64], values: &[f64], t: f64) -> Result<f64> {
    if knots.len() != values.len() {
        return Err(Error::InvalidArgument("knot and value counts differ".into()));
    }
    let w = spline_weights(knots, &[t])?;
    Ok(w[0].iter().zip(values).map(|(a, b)| a * b).sum())
}
