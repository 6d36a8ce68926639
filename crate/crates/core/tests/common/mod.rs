//! Reference implementations written directly from the discretization formulas,
//! sharing no code with the library.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use skyrmag::{DimensionlessParams, Grid, VectorField};

pub type V = [f64; 3];

pub struct Ref {
    pub n: [usize; 3],
    pub h: [f64; 3],
    /// Cell values indexed `[i][j][k]`.
    pub m: Vec<Vec<Vec<V>>>,
    pub kappa_b: f64,
}

impl Ref {
    pub fn from_field(f: &VectorField, kappa_b: f64) -> Self {
        let g = f.grid();
        let n = [g.nx, g.ny, g.nz];
        let cells = n[0] * n[1] * n[2];
        let raw = f.as_slice();
        let mut m = vec![vec![vec![[0.0; 3]; n[2]]; n[1]]; n[0]];
        for k in 0..n[2] {
            for j in 0..n[1] {
                for i in 0..n[0] {
                    let c = i + n[0] * (j + n[1] * k);
                    m[i][j][k] = [raw[c], raw[cells + c], raw[2 * cells + c]];
                }
            }
        }
        Self { n, h: [g.hx, g.hy, g.hz], m, kappa_b }
    }

    /// Value at integer position `p` along the lines, with ghost evaluation.
    pub fn value(&self, p: [isize; 3]) -> V {
        for ax in 0..3 {
            let n = self.n[ax] as isize;
            if p[ax] < 0 || p[ax] >= n {
                let mut q = p;
                let upper = p[ax] >= n;
                q[ax] = if upper { n - 1 } else { 0 };
                let inner = self.m[q[0] as usize][q[1] as usize][q[2] as usize];
                return ghost(inner, ax, upper, self.kappa_b * self.h[ax] / 2.0);
            }
        }
        self.m[p[0] as usize][p[1] as usize][p[2] as usize]
    }

    pub fn d(&self, p: [usize; 3], ax: usize) -> V {
        let n = self.n[ax];
        let ip = [p[0] as isize, p[1] as isize, p[2] as isize];
        let mut up = ip;
        up[ax] += 1;
        let mut dn = ip;
        dn[ax] -= 1;
        let h = self.h[ax];
        let (a, b, w) = if n == 1 {
            (self.value(up), self.value(dn), 2.0 * h)
        } else if p[ax] == 0 {
            (self.value(ip), self.value(dn), h)
        } else if p[ax] == n - 1 {
            (self.value(up), self.value(ip), h)
        } else {
            (self.value(up), self.value(dn), 2.0 * h)
        };
        [(a[0] - b[0]) / w, (a[1] - b[1]) / w, (a[2] - b[2]) / w]
    }

    pub fn curl(&self, p: [usize; 3]) -> V {
        let (dx, dy, dz) = (self.d(p, 0), self.d(p, 1), self.d(p, 2));
        [dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]]
    }

    pub fn lap(&self, p: [usize; 3]) -> V {
        let ip = [p[0] as isize, p[1] as isize, p[2] as isize];
        let c = self.value(ip);
        let mut out = [0.0; 3];
        for ax in 0..3 {
            let mut up = ip;
            up[ax] += 1;
            let mut dn = ip;
            dn[ax] -= 1;
            let (a, b) = (self.value(up), self.value(dn));
            for q in 0..3 {
                out[q] += (a[q] - 2.0 * c[q] + b[q]) / (self.h[ax] * self.h[ax]);
            }
        }
        out
    }

    pub fn cells(&self) -> Vec<[usize; 3]> {
        let mut v = Vec::new();
        for k in 0..self.n[2] {
            for j in 0..self.n[1] {
                for i in 0..self.n[0] {
                    v.push([i, j, k]);
                }
            }
        }
        v
    }

    /// Energy as a sum over faces (exchange) plus per-cell DMI, Zeeman and anisotropy.
    pub fn energy(&self, eps: f64, kappa: f64, q: f64, h_e: V) -> f64 {
        let vol = self.h[0] * self.h[1] * self.h[2];
        let mut exchange = 0.0;
        // every face between positions p and p + e_ax, including ghost faces
        for ax in 0..3 {
            let mut lo = [0isize; 3];
            let mut hi = [self.n[0] as isize, self.n[1] as isize, self.n[2] as isize];
            lo[ax] = -1;
            hi[ax] = self.n[ax] as isize;
            for k in lo[2]..hi[2] {
                for j in lo[1]..hi[1] {
                    for i in lo[0]..hi[0] {
                        let a = [i, j, k];
                        let mut b = a;
                        b[ax] += 1;
                        let (va, vb) = (self.value(a), self.value(b));
                        let d2: f64 = (0..3).map(|c| (vb[c] - va[c]).powi(2)).sum();
                        exchange += d2 / (self.h[ax] * self.h[ax]);
                    }
                }
            }
        }
        let mut rest = 0.0;
        for p in self.cells() {
            let m = self.m[p[0]][p[1]][p[2]];
            let c = self.curl(p);
            rest += 0.5 * kappa * (c[0] * m[0] + c[1] * m[1] + c[2] * m[2])
                - (h_e[0] * m[0] + h_e[1] * m[1] + h_e[2] * m[2])
                + 0.5 * q * (m[1] * m[1] + m[2] * m[2]);
        }
        (0.5 * eps * exchange + rest) * vol
    }
}

/// Ghost from the two printed linear systems, solved by Cramer's rule.
pub fn ghost(inner: V, ax: usize, upper: bool, k: f64) -> V {
    // transverse pair in cyclic order after the normal axis
    let a = (ax + 1) % 3;
    let b = (ax + 2) % 3;
    // (g - n) = -k (g + n) x nu, nu = +-e_ax, restricted to (a, b):
    // g_a - n_a = -k sgn (g_b + n_b),  g_b - n_b = k sgn (g_a + n_a)
    let s = if upper { 1.0 } else { -1.0 };
    let (na, nb) = (inner[a], inner[b]);
    // [1, k s; -k s, 1] [g_a; g_b] = [n_a - k s n_b; n_b + k s n_a]
    let r0 = na - k * s * nb;
    let r1 = nb + k * s * na;
    let det = 1.0 + k * k;
    let ga = (r0 - k * s * r1) / det;
    let gb = (r1 + k * s * r0) / det;
    let mut g = [0.0; 3];
    g[ax] = inner[ax];
    g[a] = ga;
    g[b] = gb;
    g
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> V {
    loop {
        let v: V = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn random_field(grid: Grid, rng: &mut ChaCha8Rng) -> VectorField {
    let mut f = VectorField::zeros(grid);
    for c in 0..grid.cells() {
        f.set(c, random_unit(rng));
    }
    f
}

pub fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Dense matrix of the implicit step operator, column by column from the reference stencils.
pub fn dense_operator(m_hat: &VectorField, p: &DimensionlessParams, lead: f64, g_: f64, d_: f64) -> Vec<Vec<f64>> {
    let grid = *m_hat.grid();
    let n = 3 * grid.cells();
    let cells = grid.cells();
    let mut l = vec![vec![0.0; n]; n];
    for col in 0..n {
        let mut e = VectorField::zeros(grid);
        e.as_mut_slice()[col] = 1.0;
        let r = Ref::from_field(&e, p.kappa_b);
        for pt in r.cells() {
            let c = pt[0] + grid.nx * (pt[1] + grid.ny * pt[2]);
            let (lap, cu) = (r.lap(pt), r.curl(pt));
            for q in 0..3 {
                l[q * cells + c][col] = p.eps * lap[q] - p.kappa * cu[q];
            }
        }
    }
    let mut a = vec![vec![0.0; n]; n];
    for c in 0..cells {
        let m = m_hat.get(c);
        for col in 0..n {
            let v: V = [l[c][col], l[cells + c][col], l[2 * cells + c][col]];
            let mv = cross(m, v);
            let mmv = cross(m, mv);
            for q in 0..3 {
                a[q * cells + c][col] = g_ * mv[q] + d_ * mmv[q];
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += lead;
    }
    a
}

pub fn ll_rhs(m: V, h: V, alpha: f64) -> V {
    let mh = cross(m, h);
    let mmh = cross(m, mh);
    [-mh[0] - alpha * mmh[0], -mh[1] - alpha * mmh[1], -mh[2] - alpha * mmh[2]]
}

/// Classical RK4 on the macrospin LL equation with a fine step.
pub fn rk4(m0: V, h: V, alpha: f64, t_end: f64, n: usize) -> Vec<V> {
    let dt = t_end / n as f64;
    let mut out = vec![m0];
    let mut m = m0;
    let add = |a: V, b: V, s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    for _ in 0..n {
        let k1 = ll_rhs(m, h, alpha);
        let k2 = ll_rhs(add(m, k1, dt / 2.0), h, alpha);
        let k3 = ll_rhs(add(m, k2, dt / 2.0), h, alpha);
        let k4 = ll_rhs(add(m, k3, dt), h, alpha);
        for q in 0..3 {
            m[q] += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        out.push(m);
    }
    out
}
