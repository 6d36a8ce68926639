//! Ghost layers encoding the chiral boundary condition `dm/dnu = -kappa_b m x nu`.
//!
//! Discretizing the condition at the face midpoint between the last interior cell `n`
//! and its ghost `g`,
//!
//! ```text
//! (g - n) / h = -kappa_b (g + n) / 2 x nu,
//! ```
//!
//! gives a closed-form linear map per face. With `k = kappa_b h / 2`,
//! `c = (1 - k^2) / (1 + k^2)` and `s = 2k / (1 + k^2)`, the component along the
//! face normal is copied and the transverse pair `(a, b)` (cyclic successors of the
//! normal axis) is rotated:
//!
//! ```text
//! + face:  g_a = c n_a - s n_b,   g_b =  s n_a + c n_b
//! - face:  g_a = c n_a + s n_b,   g_b = -s n_a + c n_b
//! ```
//!
//! Only face layers are stored; no stencil reads edge or corner ghosts.

use crate::field::{Vec3, VectorField};
use crate::grid::Grid;

/// The 2x2 face map for one axis, parametrized by `k = kappa_b h / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceRotation {
    pub k: f64,
    pub c: f64,
    pub s: f64,
}

impl FaceRotation {
    pub fn new(k: f64) -> Self {
        let d = 1.0 + k * k;
        Self {
            k,
            c: (1.0 - k * k) / d,
            s: 2.0 * k / d,
        }
    }

    /// Ghost value beyond the face with outward normal `+e_axis` (`upper = true`)
    /// or `-e_axis`.
    #[inline]
    pub fn apply(&self, axis: usize, upper: bool, n: Vec3) -> Vec3 {
        let a = (axis + 1) % 3;
        let b = (axis + 2) % 3;
        let s = if upper { self.s } else { -self.s };
        let mut g = [0.0; 3];
        g[axis] = n[axis];
        g[a] = self.c * n[a] - s * n[b];
        g[b] = s * n[a] + self.c * n[b];
        g
    }
}

/// Interior field plus one ghost layer on each of the six faces.
#[derive(Debug, Clone)]
pub struct GhostField<'a> {
    interior: &'a VectorField,
    /// `faces[axis][side]`, side 0 = lower (index -1), side 1 = upper (index n).
    faces: [[Vec<Vec3>; 2]; 3],
    rotations: [FaceRotation; 3],
}

/// Half-step boundary coefficients `k_b = kappa_b h / 2` per axis.
pub fn boundary_coefficients(grid: &Grid, kappa_b: f64) -> [f64; 3] {
    [
        kappa_b * grid.hx / 2.0,
        kappa_b * grid.hy / 2.0,
        kappa_b * grid.hz / 2.0,
    ]
}

/// Fill all six face layers of `field` for boundary stiffness `kappa_b`.
///
/// Linear in `field`, so it is also applied to Krylov iterates.
pub fn fill_ghosts(field: &VectorField, kappa_b: f64) -> GhostField<'_> {
    let grid = *field.grid();
    let kb = boundary_coefficients(&grid, kappa_b);
    let rotations = [
        FaceRotation::new(kb[0]),
        FaceRotation::new(kb[1]),
        FaceRotation::new(kb[2]),
    ];
    let [nx, ny, nz] = grid.dims();

    let mut faces: [[Vec<Vec3>; 2]; 3] = Default::default();
    for (axis, rot) in rotations.iter().enumerate() {
        let (n_axis, n_u, n_v) = match axis {
            0 => (nx, ny, nz),
            1 => (ny, nx, nz),
            _ => (nz, nx, ny),
        };
        for (side, upper) in [(0usize, false), (1usize, true)] {
            let layer_idx = if upper { n_axis - 1 } else { 0 };
            let mut layer = Vec::with_capacity(n_u * n_v);
            for v in 0..n_v {
                for u in 0..n_u {
                    let (i, j, k) = match axis {
                        0 => (layer_idx, u, v),
                        1 => (u, layer_idx, v),
                        _ => (u, v, layer_idx),
                    };
                    layer.push(rot.apply(axis, upper, field.at(i, j, k)));
                }
            }
            faces[axis][side] = layer;
        }
    }

    GhostField {
        interior: field,
        faces,
        rotations,
    }
}

impl<'a> GhostField<'a> {
    #[inline]
    pub fn interior(&self) -> &'a VectorField {
        self.interior
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        self.interior.grid()
    }

    pub fn rotations(&self) -> &[FaceRotation; 3] {
        &self.rotations
    }

    /// Ghost value on the face layer: `face(axis, upper, u, v)` where `(u, v)` are the
    /// transverse indices in increasing axis order.
    #[inline]
    pub fn face(&self, axis: usize, upper: bool, u: usize, v: usize) -> Vec3 {
        let g = self.interior.grid();
        let n_u = if axis == 0 { g.ny } else { g.nx };
        self.faces[axis][upper as usize][u + n_u * v]
    }

    /// Value at `(i, j, k)` where at most one index may step one cell outside the grid.
    #[inline]
    pub fn value(&self, i: isize, j: isize, k: isize) -> Vec3 {
        let g = self.interior.grid();
        let (nx, ny, nz) = (g.nx as isize, g.ny as isize, g.nz as isize);
        if i < 0 || i >= nx {
            self.face(0, i >= nx, j as usize, k as usize)
        } else if j < 0 || j >= ny {
            self.face(1, j >= ny, i as usize, k as usize)
        } else if k < 0 || k >= nz {
            self.face(2, k >= nz, i as usize, j as usize)
        } else {
            self.interior.at(i as usize, j as usize, k as usize)
        }
    }

    /// Neighbor of cell `(i, j, k)` one step along `axis` in direction `dir` (+1 or -1).
    #[inline]
    pub fn neighbor(&self, i: usize, j: usize, k: usize, axis: usize, dir: isize) -> Vec3 {
        let (mut a, mut b, mut c) = (i as isize, j as isize, k as isize);
        match axis {
            0 => a += dir,
            1 => b += dir,
            _ => c += dir,
        }
        self.value(a, b, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::norm;

    fn grid() -> Grid {
        Grid::new([3, 4, 2], [0.025, 0.025, 0.025], 80e-9).unwrap()
    }

    fn pseudo_random_field(g: Grid, seed: u64) -> VectorField {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut f = VectorField::zeros(g);
        for c in 0..g.cells() {
            f.set(c, [next(), next(), next()]);
        }
        f
    }

    #[test]
    fn printed_fege_ghost_value() {
        // kappa_b = 7.20, hx = 0.025 -> k = 0.09
        let g = Grid::new([2, 1, 1], [0.025; 3], 80e-9).unwrap();
        let mut f = VectorField::zeros(g);
        f.set(0, [0.0, 1.0, 0.0]);
        f.set(1, [0.0, 1.0, 0.0]);
        let gf = fill_ghosts(&f, 7.20);
        assert!((gf.rotations()[0].k - 0.09).abs() < 1e-15);
        let ghost = gf.value(2, 0, 0);
        assert_eq!(ghost[0], 0.0);
        assert!((ghost[1] - 0.98393).abs() < 5e-6, "{ghost:?}");
        assert!((ghost[2] - 0.17855).abs() < 5e-6, "{ghost:?}");
        // lower face uses the opposite off-diagonal signs
        let ghost = gf.value(-1, 0, 0);
        assert!((ghost[1] - 0.98393).abs() < 5e-6);
        assert!((ghost[2] + 0.17855).abs() < 5e-6);
    }

    #[test]
    fn normal_component_is_copied() {
        let g = Grid::new([2, 2, 2], [0.025; 3], 80e-9).unwrap();
        let f = VectorField::uniform(g, [1.0, 0.0, 0.0]).unwrap();
        let gf = fill_ghosts(&f, 7.2);
        assert_eq!(gf.value(2, 0, 0), [1.0, 0.0, 0.0]);
        assert_eq!(gf.value(-1, 1, 1), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_stiffness_is_neumann() {
        let f = pseudo_random_field(grid(), 3);
        let gf = fill_ghosts(&f, 0.0);
        let g = *f.grid();
        for k in 0..g.nz {
            for j in 0..g.ny {
                assert_eq!(gf.value(-1, j as isize, k as isize), f.at(0, j, k));
                assert_eq!(gf.value(g.nx as isize, j as isize, k as isize), f.at(g.nx - 1, j, k));
            }
        }
        for k in 0..g.nz {
            for i in 0..g.nx {
                assert_eq!(gf.value(i as isize, -1, k as isize), f.at(i, 0, k));
                assert_eq!(gf.value(i as isize, g.ny as isize, k as isize), f.at(i, g.ny - 1, k));
            }
        }
        for j in 0..g.ny {
            for i in 0..g.nx {
                assert_eq!(gf.value(i as isize, j as isize, -1), f.at(i, j, 0));
                assert_eq!(gf.value(i as isize, j as isize, g.nz as isize), f.at(i, j, g.nz - 1));
            }
        }
    }

    #[test]
    fn ghost_satisfies_discrete_boundary_condition() {
        // (g - n)/h = -kappa_b (g + n)/2 x nu on every face
        let f = pseudo_random_field(grid(), 11);
        let kappa_b = 7.2;
        let gf = fill_ghosts(&f, kappa_b);
        let g = *f.grid();
        let h = g.spacing();
        for axis in 0..3 {
            for upper in [false, true] {
                let mut nu = [0.0; 3];
                nu[axis] = if upper { 1.0 } else { -1.0 };
                let (i, j, k) = match axis {
                    0 => (if upper { g.nx - 1 } else { 0 }, 1, 1),
                    1 => (1, if upper { g.ny - 1 } else { 0 }, 1),
                    _ => (1, 1, if upper { g.nz - 1 } else { 0 }),
                };
                let n = f.at(i, j, k);
                let ghost = gf.neighbor(i, j, k, axis, if upper { 1 } else { -1 });
                let avg = [(ghost[0] + n[0]) / 2.0, (ghost[1] + n[1]) / 2.0, (ghost[2] + n[2]) / 2.0];
                let rhs = crate::field::cross(avg, nu);
                for c in 0..3 {
                    let lhs = (ghost[c] - n[c]) / h[axis];
                    assert!((lhs + kappa_b * rhs[c]).abs() < 1e-12, "axis {axis} upper {upper} comp {c}");
                }
            }
        }
    }

    #[test]
    fn ghost_preserves_norm() {
        let f = pseudo_random_field(grid(), 5);
        for kappa_b in [0.0, 0.3, 7.2, 100.0] {
            let gf = fill_ghosts(&f, kappa_b);
            let g = *f.grid();
            for k in 0..g.nz {
                for j in 0..g.ny {
                    let n0 = norm(f.at(0, j, k));
                    let ng = norm(gf.value(-1, j as isize, k as isize));
                    assert!((n0 - ng).abs() <= 1e-14);
                }
            }
        }
    }
}
