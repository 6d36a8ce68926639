//! Finite-difference operators on ghost-filled fields, the discrete energy,
//! energy-density maps and the topological charge.
//!
//! First derivatives use a centered difference in the interior and a one-sided
//! difference against the ghost value in the first and last cell of each line.
//! The Laplacian is the 7-point stencil with ghosts substituted at the faces.
//! The exchange energy sums squared face differences, ghost faces included, so
//! that its gradient is exactly `-eps` times that Laplacian.

use crate::field::{cross, dot, pairwise_sum, ScalarField, Vec3, VectorField};
use crate::ghost::{fill_ghosts, GhostField};
use crate::grid::Grid;
use crate::params::DimensionlessParams;

/// Derivative of all three components along `axis` at cell `(i, j, k)`.
#[inline]
pub fn derivative(gf: &GhostField<'_>, i: usize, j: usize, k: usize, axis: usize) -> Vec3 {
    let grid = gf.grid();
    let n = grid.dims()[axis];
    let h = grid.spacing()[axis];
    let idx = [i, j, k][axis];
    let (hi, lo, width) = if n == 1 {
        (gf.neighbor(i, j, k, axis, 1), gf.neighbor(i, j, k, axis, -1), 2.0 * h)
    } else if idx == 0 {
        (gf.interior().at(i, j, k), gf.neighbor(i, j, k, axis, -1), h)
    } else if idx == n - 1 {
        (gf.neighbor(i, j, k, axis, 1), gf.interior().at(i, j, k), h)
    } else {
        (gf.neighbor(i, j, k, axis, 1), gf.neighbor(i, j, k, axis, -1), 2.0 * h)
    };
    [
        (hi[0] - lo[0]) / width,
        (hi[1] - lo[1]) / width,
        (hi[2] - lo[2]) / width,
    ]
}

/// All three partial derivatives at a cell, `[d/dx, d/dy, d/dz]`.
#[inline]
pub fn gradient(gf: &GhostField<'_>, i: usize, j: usize, k: usize) -> [Vec3; 3] {
    [
        derivative(gf, i, j, k, 0),
        derivative(gf, i, j, k, 1),
        derivative(gf, i, j, k, 2),
    ]
}

#[inline]
fn curl_from_gradient(d: &[Vec3; 3]) -> Vec3 {
    [
        d[1][2] - d[2][1],
        d[2][0] - d[0][2],
        d[0][1] - d[1][0],
    ]
}

#[inline]
fn laplacian_at(gf: &GhostField<'_>, i: usize, j: usize, k: usize) -> Vec3 {
    let grid = gf.grid();
    let h = grid.spacing();
    let m = gf.interior().at(i, j, k);
    let mut out = [0.0; 3];
    for axis in 0..3 {
        let p = gf.neighbor(i, j, k, axis, 1);
        let q = gf.neighbor(i, j, k, axis, -1);
        let inv = 1.0 / (h[axis] * h[axis]);
        for c in 0..3 {
            out[c] += (q[c] - 2.0 * m[c] + p[c]) * inv;
        }
    }
    out
}

fn map_cells(grid: &Grid, mut f: impl FnMut(usize, usize, usize) -> Vec3) -> VectorField {
    let mut out = VectorField::zeros(*grid);
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                out.set(grid.index(i, j, k), f(i, j, k));
            }
        }
    }
    out
}

pub fn laplacian(gf: &GhostField<'_>) -> VectorField {
    map_cells(gf.grid(), |i, j, k| laplacian_at(gf, i, j, k))
}

pub fn curl(gf: &GhostField<'_>) -> VectorField {
    map_cells(gf.grid(), |i, j, k| curl_from_gradient(&gradient(gf, i, j, k)))
}

/// Directional derivative `(d . grad) m` per cell.
pub fn directional_derivative(gf: &GhostField<'_>, d: Vec3) -> VectorField {
    map_cells(gf.grid(), |i, j, k| {
        let g = gradient(gf, i, j, k);
        let mut out = [0.0; 3];
        for (axis, ga) in g.iter().enumerate() {
            for c in 0..3 {
                out[c] += d[axis] * ga[c];
            }
        }
        out
    })
}

/// The stiff linear part of the effective field, `eps Lap m - kappa curl m`.
pub fn exchange_dmi_field(gf: &GhostField<'_>, eps: f64, kappa: f64) -> VectorField {
    map_cells(gf.grid(), |i, j, k| {
        let lap = laplacian_at(gf, i, j, k);
        let cu = curl_from_gradient(&gradient(gf, i, j, k));
        [
            eps * lap[0] - kappa * cu[0],
            eps * lap[1] - kappa * cu[1],
            eps * lap[2] - kappa * cu[2],
        ]
    })
}

/// Exchange integrand `|grad m|^2` at a cell from face differences.
///
/// Each interior face difference is shared equally by its two cells; the face
/// towards a ghost belongs to the boundary cell alone. Summed over the grid this is
/// the quadratic form whose gradient is the 7-point Laplacian.
fn face_gradient_sq(gf: &GhostField<'_>, i: usize, j: usize, k: usize) -> f64 {
    let grid = gf.grid();
    let dims = grid.dims();
    let h = grid.spacing();
    let m = gf.interior().at(i, j, k);
    let idx = [i, j, k];
    let mut sum = 0.0;
    for axis in 0..3 {
        let n = dims[axis];
        let inv = 1.0 / (h[axis] * h[axis]);
        for (dir, at_edge) in [(1isize, idx[axis] == n - 1), (-1isize, idx[axis] == 0)] {
            let nb = gf.neighbor(i, j, k, axis, dir);
            let d = [nb[0] - m[0], nb[1] - m[1], nb[2] - m[2]];
            let w = if at_edge { 1.0 } else { 0.5 };
            sum += w * dot(d, d) * inv;
        }
    }
    sum
}

/// Per-cell energy densities.
#[derive(Debug, Clone)]
pub struct EnergyDensityMaps {
    /// Everything except DMI: exchange, Zeeman and anisotropy.
    pub local: ScalarField,
    /// DMI density `kappa/2 (curl m) . m`.
    pub dmi: ScalarField,
    /// `local + dmi`.
    pub total: ScalarField,
}

/// Energy densities of `field` with uniform applied field `h_e` (units of Ms).
pub fn energy_density_maps(
    field: &VectorField,
    params: &DimensionlessParams,
    h_e: Vec3,
) -> EnergyDensityMaps {
    let grid = *field.grid();
    let gf = fill_ghosts(field, params.kappa_b);
    let mut local = ScalarField::zeros(grid);
    let mut dmi = ScalarField::zeros(grid);
    let mut total = ScalarField::zeros(grid);
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let c = grid.index(i, j, k);
                let m = field.get(c);
                let d = gradient(&gf, i, j, k);
                let l = 0.5 * params.eps * face_gradient_sq(&gf, i, j, k) - dot(h_e, m)
                    + 0.5 * params.q * (m[1] * m[1] + m[2] * m[2]);
                let dm = 0.5 * params.kappa * dot(curl_from_gradient(&d), m);
                local.as_mut_slice()[c] = l;
                dmi.as_mut_slice()[c] = dm;
                total.as_mut_slice()[c] = l + dm;
            }
        }
    }
    EnergyDensityMaps { local, dmi, total }
}

/// Dimensionless energy `I[m]` by midpoint quadrature of the total density.
pub fn energy(field: &VectorField, params: &DimensionlessParams, h_e: Vec3) -> f64 {
    energy_density_maps(field, params, h_e).total.integrate()
}

/// Topological charge of z-layer `layer` (0-based) with the given ghost layers.
pub fn skyrmion_number_with(gf: &GhostField<'_>, layer: usize) -> f64 {
    let grid = gf.grid();
    let mut terms = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let m = gf.interior().at(i, j, layer);
            let dx = derivative(gf, i, j, layer, 0);
            let dy = derivative(gf, i, j, layer, 1);
            terms.push(dot(m, cross(dx, dy)));
        }
    }
    pairwise_sum(&terms) * grid.hx * grid.hy / (4.0 * std::f64::consts::PI)
}

/// Topological charge `Q = 1/(4 pi) sum m . (dm/dx x dm/dy) hx hy` over z-layer
/// `layer` (0-based).
///
/// Ghosts are filled with zero boundary stiffness, so one-sided derivatives at the
/// sample edge vanish for uniform data and `Q` depends on the field alone.
pub fn skyrmion_number(field: &VectorField, layer: usize) -> f64 {
    assert!(layer < field.grid().nz, "z layer {layer} out of range");
    skyrmion_number_with(&fill_ghosts(field, 0.0), layer)
}

/// Middle z-layer, the default for charge reporting.
pub fn middle_layer(grid: &Grid) -> usize {
    grid.nz / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(nx: usize, ny: usize, nz: usize, h: f64) -> Grid {
        Grid::new([nx, ny, nz], [h; 3], 1.0).unwrap()
    }

    #[test]
    fn uniform_field_has_zero_laplacian_and_curl() {
        let f = VectorField::uniform(grid(5, 4, 3, 0.1), [0.3, -0.2, 0.9]).unwrap();
        let gf = fill_ghosts(&f, 0.0);
        assert_eq!(laplacian(&gf).max_abs_diff(&VectorField::zeros(*f.grid())), 0.0);
        assert_eq!(curl(&gf).max_abs_diff(&VectorField::zeros(*f.grid())), 0.0);
    }

    fn interior_cells(g: &Grid) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (1..g.nz - 1).flat_map(move |k| {
            (1..g.ny - 1).flat_map(move |j| (1..g.nx - 1).map(move |i| (i, j, k)))
        })
    }

    #[test]
    fn laplacian_of_linear_and_quadratic_data() {
        let g = grid(6, 5, 4, 0.1);
        let lin = VectorField::from_fn(g, |x| [0.0, 0.0, x[0]]);
        let gf = fill_ghosts(&lin, 0.0);
        let lap = laplacian(&gf);
        for (i, j, k) in interior_cells(&g) {
            assert!(lap.at(i, j, k)[2].abs() < 1e-10);
        }
        let quad = VectorField::from_fn(g, |x| [0.0, 0.0, x[0] * x[0]]);
        let gf = fill_ghosts(&quad, 0.0);
        let lap = laplacian(&gf);
        for (i, j, k) in interior_cells(&g) {
            assert!((lap.at(i, j, k)[2] - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn curl_of_linear_field() {
        let g = grid(5, 5, 5, 0.2);
        let f = VectorField::from_fn(g, |x| [0.0, 0.0, x[0]]);
        let gf = fill_ghosts(&f, 0.0);
        let cu = curl(&gf);
        for (i, j, k) in interior_cells(&g) {
            let v = cu.at(i, j, k);
            assert!(v[0].abs() < 1e-12 && (v[1] + 1.0).abs() < 1e-12 && v[2].abs() < 1e-12);
        }
    }

    #[test]
    fn curl_converges_at_second_order() {
        use std::f64::consts::PI;
        let err = |n: usize| {
            let g = grid(n, 4, 1, 1.0 / n as f64);
            let f = VectorField::from_fn(g, |x| [0.0, (2.0 * PI * x[0]).sin(), 0.0]);
            let gf = fill_ghosts(&f, 0.0);
            let cu = curl(&gf);
            let mut e: f64 = 0.0;
            for i in 1..n - 1 {
                let x = g.center(i, 0, 0)[0];
                e = e.max((cu.at(i, 1, 0)[2] - 2.0 * PI * (2.0 * PI * x).cos()).abs());
            }
            e
        };
        let errs: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| err(n)).collect();
        for w in errs.windows(2) {
            let rate = (w[0] / w[1]).log2();
            assert!(rate >= 1.9, "rate {rate} from {errs:?}");
        }
    }

    #[test]
    fn laplacian_converges_at_second_order() {
        use std::f64::consts::PI;
        let err = |n: usize| {
            let h = 1.0 / n as f64;
            let g = grid(n, n, 3, h);
            let f = VectorField::from_fn(g, |x| [(PI * x[0]).sin() * (PI * x[1]).cos(), 0.0, 0.0]);
            let gf = fill_ghosts(&f, 0.0);
            let lap = laplacian(&gf);
            let mut e: f64 = 0.0;
            for j in 1..n - 1 {
                for i in 1..n - 1 {
                    let x = g.center(i, j, 1);
                    let exact = -2.0 * PI * PI * (PI * x[0]).sin() * (PI * x[1]).cos();
                    e = e.max((lap.at(i, j, 1)[0] - exact).abs());
                }
            }
            e
        };
        let errs: Vec<f64> = [16, 32, 64, 128].iter().map(|&n| err(n)).collect();
        for w in errs.windows(2) {
            assert!((w[0] / w[1]).log2() >= 1.9, "{errs:?}");
        }
    }

    #[test]
    fn uniform_energy_is_zero() {
        let f = VectorField::uniform(grid(4, 4, 2, 0.25), [0.0, 0.0, 1.0]).unwrap();
        let p = DimensionlessParams {
            eps: 0.0148,
            kappa: 0.0,
            kappa_b: 0.0,
            q: 0.0,
            alpha: 0.6,
        };
        assert_eq!(energy(&f, &p, [0.0; 3]), 0.0);
        let maps = energy_density_maps(&f, &p, [0.0; 3]);
        assert!(maps.total.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zeeman_and_anisotropy_energy() {
        let g = grid(2, 2, 1, 0.5);
        let f = VectorField::uniform(g, [0.0, 0.6, 0.8]).unwrap();
        let p = DimensionlessParams {
            eps: 1.0,
            kappa: 0.0,
            kappa_b: 0.0,
            q: 2.0,
            alpha: 0.5,
        };
        let vol = 0.5 * 0.5 * 0.5 * 4.0;
        let e = energy(&f, &p, [0.0, 0.0, 1.5]);
        let expected = vol * (-1.5 * 0.8 + 0.5 * 2.0 * (0.36 + 0.64));
        assert!((e - expected).abs() < 1e-14);
    }

    #[test]
    fn uniform_charge_is_exactly_zero() {
        let f = VectorField::uniform(grid(8, 8, 3, 0.1), [0.1, 0.2, 0.97]).unwrap();
        assert_eq!(skyrmion_number(&f, 1), 0.0);
    }

    #[test]
    fn charge_of_a_smooth_skyrmion_profile() {
        // Belavin-Polyakov-like profile, core down in an up background
        let n = 64;
        let g = grid(n, n, 1, 1.0 / n as f64);
        let r0 = 0.08;
        let f = VectorField::from_fn(g, |x| {
            let (dx, dy) = (x[0] - 0.5, x[1] - 0.5);
            let r = (dx * dx + dy * dy).sqrt();
            let theta = 2.0 * (r0 / r.max(1e-12)).atan();
            let phi = dy.atan2(dx);
            [theta.sin() * phi.cos(), theta.sin() * phi.sin(), -theta.cos()]
        });
        assert!(f.max_norm_defect() < 1e-14);
        let q = skyrmion_number(&f, 0);
        // the tail beyond the sample carries a few percent of the charge
        assert!((q.abs() - 1.0).abs() < 0.1, "Q = {q}");
        let neg = VectorField::from_data(g, f.as_slice().iter().map(|x| -x).collect()).unwrap();
        assert_eq!(skyrmion_number(&neg, 0), -q);
    }
}
