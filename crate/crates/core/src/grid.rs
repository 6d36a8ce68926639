//! Structured cell-centered grids.
//!
//! Cell `(i, j, k)` (0-based) has its center at `((i + 1/2) hx, (j + 1/2) hy, (k + 1/2) hz)`
//! in dimensionless coordinates, so the sample occupies `[0, nx hx] x [0, ny hy] x [0, nz hz]`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
    /// Length scale `L` in meters; dimensionless lengths are multiples of it.
    pub length_scale: f64,
}

impl Grid {
    pub fn new(dims: [usize; 3], spacing: [f64; 3], length_scale: f64) -> Result<Self> {
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidArgument(format!(
                "cell counts must be positive, got {dims:?}"
            )));
        }
        if dims
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .and_then(|n| n.checked_mul(3))
            .is_none()
        {
            return Err(Error::InvalidArgument("grid too large".into()));
        }
        if spacing.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "cell sizes must be positive and finite, got {spacing:?}"
            )));
        }
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "length scale must be positive, got {length_scale}"
            )));
        }
        Ok(Self {
            nx: dims[0],
            ny: dims[1],
            nz: dims[2],
            hx: spacing[0],
            hy: spacing[1],
            hz: spacing[2],
            length_scale,
        })
    }

    /// Grid of a box sample of physical size `size_m` meshed with cells of `cell_m`,
    /// nondimensionalized by `length_scale` meters.
    pub fn from_physical(size_m: [f64; 3], cell_m: [f64; 3], length_scale: f64) -> Result<Self> {
        let mut dims = [0usize; 3];
        for a in 0..3 {
            if !(cell_m[a] > 0.0 && size_m[a] > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "sample size and mesh size must be positive on axis {a}"
                )));
            }
            let ratio = size_m[a] / cell_m[a];
            let n = ratio.round();
            if (ratio - n).abs() > 1e-9 * ratio.max(1.0) || n < 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "mesh size {} does not divide sample size {} on axis {a}",
                    cell_m[a], size_m[a]
                )));
            }
            dims[a] = n as usize;
        }
        let spacing = [
            cell_m[0] / length_scale,
            cell_m[1] / length_scale,
            cell_m[2] / length_scale,
        ];
        Self::new(dims, spacing, length_scale)
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        [self.nx, self.ny, self.nz]
    }

    #[inline]
    pub fn spacing(&self) -> [f64; 3] {
        [self.hx, self.hy, self.hz]
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.hx * self.hy * self.hz
    }

    /// Linear cell index, x fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    #[inline]
    pub fn coords(&self, cell: usize) -> (usize, usize, usize) {
        let i = cell % self.nx;
        let rest = cell / self.nx;
        (i, rest % self.ny, rest / self.ny)
    }

    #[inline]
    pub fn center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            (i as f64 + 0.5) * self.hx,
            (j as f64 + 0.5) * self.hy,
            (k as f64 + 0.5) * self.hz,
        ]
    }

    /// Dimensionless extent of the sample along each axis.
    pub fn extent(&self) -> [f64; 3] {
        [
            self.nx as f64 * self.hx,
            self.ny as f64 * self.hy,
            self.nz as f64 * self.hz,
        ]
    }

    /// True when both grids have identical cell counts and spacings.
    pub fn same_shape(&self, other: &Grid) -> bool {
        self.dims() == other.dims() && self.spacing() == other.spacing()
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{:?}/{:?} vs {:?}/{:?}",
                self.dims(),
                self.spacing(),
                other.dims(),
                other.spacing()
            )))
        }
    }
}
