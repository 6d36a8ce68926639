//! Restarted GMRES for matrix-free nonsymmetric operators.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovConfig {
    /// Relative residual tolerance `|b - A x| / |b|`.
    pub tolerance: f64,
    /// Total inner iterations across restarts.
    pub max_iterations: usize,
    /// Krylov subspace dimension before restart.
    pub restart: usize,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 500,
            restart: 60,
        }
    }
}

impl KrylovConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "Krylov tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 || self.restart == 0 {
            return Err(Error::InvalidArgument(
                "Krylov iteration limits must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovStats {
    pub iterations: usize,
    pub residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = [0.0; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            s[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (s[0] + s[1]) + (s[2] + s[3]) + tail
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solve `A x = b` with right-preconditioned GMRES, `A` applied through `apply(x, y)`
/// writing `y = A x`, and preconditioner `M^{-1} = precond_scale * I`.
///
/// `x` holds the initial guess on entry and the solution on return.
pub fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    precond_scale: f64,
    config: &KrylovConfig,
) -> Result<KrylovStats> {
    let n = b.len();
    assert_eq!(x.len(), n, "solution and right-hand side lengths differ");
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(KrylovStats {
            iterations: 0,
            residual: 0.0,
        });
    }
    let m = config.restart.min(config.max_iterations).max(1);
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut hess = vec![vec![0.0; m]; m + 1];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut total = 0;

    loop {
        apply(x, &mut w);
        for i in 0..n {
            r[i] = b[i] - w[i];
        }
        let beta = norm2(&r);
        let rel = beta / bnorm;
        if rel <= config.tolerance {
            return Ok(KrylovStats {
                iterations: total,
                residual: rel,
            });
        }
        if total >= config.max_iterations {
            return Err(Error::SolverFailure {
                residual: rel,
                iterations: total,
            });
        }

        basis.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        g.iter_mut().for_each(|v| *v = 0.0);
        g[0] = beta;
        let mut k_used = 0;
        let mut estimate = rel;

        for k in 0..m {
            if total >= config.max_iterations {
                break;
            }
            for i in 0..n {
                z[i] = precond_scale * basis[k][i];
            }
            apply(&z, &mut w);
            // modified Gram-Schmidt
            for (j, v) in basis.iter().enumerate() {
                let hjk = dot(&w, v);
                hess[j][k] = hjk;
                for i in 0..n {
                    w[i] -= hjk * v[i];
                }
            }
            let hnext = norm2(&w);
            hess[k + 1][k] = hnext;
            for j in 0..k {
                let t = cs[j] * hess[j][k] + sn[j] * hess[j + 1][k];
                hess[j + 1][k] = -sn[j] * hess[j][k] + cs[j] * hess[j + 1][k];
                hess[j][k] = t;
            }
            let (a, bb) = (hess[k][k], hess[k + 1][k]);
            let d = a.hypot(bb);
            if d == 0.0 {
                cs[k] = 1.0;
                sn[k] = 0.0;
            } else {
                cs[k] = a / d;
                sn[k] = bb / d;
            }
            hess[k][k] = d;
            hess[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            total += 1;
            k_used = k + 1;
            estimate = g[k + 1].abs() / bnorm;
            if estimate <= config.tolerance || hnext == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }

        // back substitution on the triangular system
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for j in i + 1..k_used {
                s -= hess[i][j] * y[j];
            }
            y[i] = if hess[i][i] != 0.0 { s / hess[i][i] } else { 0.0 };
        }
        for (j, yj) in y.iter().enumerate() {
            let c = precond_scale * yj;
            for i in 0..n {
                x[i] += c * basis[j][i];
            }
        }
        if k_used == 0 && estimate > config.tolerance {
            return Err(Error::SolverFailure {
                residual: estimate,
                iterations: total,
            });
        }
    }
}
