//! Cell-centered vector and scalar fields.
//!
//! Storage is component-major: all first components (x fastest), then all second
//! components, then all third. The snapshot format writes this buffer verbatim.

use crate::error::{Error, Result};
use crate::grid::Grid;

pub type Vec3 = [f64; 3];

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

/// A 3-vector per cell. Holds magnetizations as well as operator outputs
/// (Laplacians, curls, fields) and Krylov iterates, which need not be unit length.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    data: Vec<f64>,
}

/// Unit-vector field `m = M / Ms`.
pub type Magnetization = VectorField;

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            data: vec![0.0; 3 * grid.cells()],
            grid,
        }
    }

    pub fn from_data(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != 3 * grid.cells() {
            return Err(Error::InvalidArgument(format!(
                "expected {} scalars, got {}",
                3 * grid.cells(),
                data.len()
            )));
        }
        Ok(Self { grid, data })
    }

    /// Every cell set to `direction / |direction|`.
    pub fn uniform(grid: Grid, direction: Vec3) -> Result<Self> {
        let n = norm(direction);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "uniform direction must be nonzero, got {direction:?}"
            )));
        }
        let unit = [direction[0] / n, direction[1] / n, direction[2] / n];
        let mut f = Self::zeros(grid);
        for cell in 0..grid.cells() {
            f.set(cell, unit);
        }
        Ok(f)
    }

    /// Build a field by evaluating `f` at every cell center.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 3]) -> Vec3) -> Self {
        let mut out = Self::zeros(grid);
        for k in 0..grid.nz {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let c = grid.index(i, j, k);
                    out.set(c, f(grid.center(i, j, k)));
                }
            }
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn cells(&self) -> usize {
        self.grid.cells()
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn component(&self, c: usize) -> &[f64] {
        let n = self.cells();
        &self.data[c * n..(c + 1) * n]
    }

    #[inline]
    pub fn get(&self, cell: usize) -> Vec3 {
        let n = self.cells();
        [self.data[cell], self.data[n + cell], self.data[2 * n + cell]]
    }

    #[inline]
    pub fn set(&mut self, cell: usize, v: Vec3) {
        let n = self.cells();
        self.data[cell] = v[0];
        self.data[n + cell] = v[1];
        self.data[2 * n + cell] = v[2];
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.get(self.grid.index(i, j, k))
    }

    /// Normalize every cell to unit length.
    ///
    /// Cells already of unit length to within two ulps are left as they are, which
    /// makes projection exactly idempotent.
    pub fn project(&self) -> Result<Self> {
        let mut out = self.clone();
        out.project_in_place()?;
        Ok(out)
    }

    pub fn project_in_place(&mut self) -> Result<()> {
        for cell in 0..self.cells() {
            let v = self.get(cell);
            let n = norm(v);
            if !(n > 0.0 && n.is_finite()) {
                return Err(Error::DegenerateState { cell });
            }
            if (n - 1.0).abs() <= 2.0 * f64::EPSILON {
                continue;
            }
            self.set(cell, [v[0] / n, v[1] / n, v[2] / n]);
        }
        Ok(())
    }

    /// `max_cells | |m| - 1 |`.
    pub fn max_norm_defect(&self) -> f64 {
        (0..self.cells())
            .map(|c| (norm(self.get(c)) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Arithmetic mean of each component over all cells.
    pub fn spatial_average(&self) -> Vec3 {
        let n = self.cells() as f64;
        let mut avg = [0.0; 3];
        for (c, a) in avg.iter_mut().enumerate() {
            *a = pairwise_sum(self.component(c)) / n;
        }
        avg
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: f64, other: &VectorField) {
        debug_assert!(self.grid.same_shape(&other.grid));
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += a * y;
        }
    }

    pub fn scale(&mut self, a: f64) {
        for x in &mut self.data {
            *x *= a;
        }
    }

    /// `a * self + b * other` as a new field.
    pub fn lincomb(&self, a: f64, other: &VectorField, b: f64) -> VectorField {
        debug_assert!(self.grid.same_shape(&other.grid));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        VectorField {
            grid: self.grid,
            data,
        }
    }

    /// `max |self - other|` over all scalars.
    pub fn max_abs_diff(&self, other: &VectorField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Discrete L2 distance scaled by the square root of the cell volume.
    pub fn l2_distance(&self, other: &VectorField) -> f64 {
        let sq: Vec<f64> = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .collect();
        (pairwise_sum(&sq) * self.grid.cell_volume()).sqrt()
    }
}

/// One scalar per cell (energy densities).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            data: vec![0.0; grid.cells()],
            grid,
        }
    }

    pub fn from_data(grid: Grid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.cells() {
            return Err(Error::InvalidArgument(format!(
                "expected {} scalars, got {}",
                grid.cells(),
                data.len()
            )));
        }
        Ok(Self { grid, data })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    /// Midpoint-rule integral: sum of cell values times the cell volume.
    pub fn integrate(&self) -> f64 {
        pairwise_sum(&self.data) * self.grid.cell_volume()
    }
}

/// Fixed-order pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const BLOCK: usize = 64;
    if xs.len() <= BLOCK {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}
