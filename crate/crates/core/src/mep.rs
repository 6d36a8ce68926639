//! String method for minimum energy paths between two relaxed textures.
//!
//! Each outer iteration evolves the interior images by heat flow, computes their
//! arc-length parametrization, redistributes them to equal arc length by natural
//! cubic splines in each scalar degree of freedom, and projects onto the sphere.

use rayon::prelude::*;

use crate::drive::DriveSpec;
use crate::error::{Error, Result};
use crate::field::{cross, norm, VectorField};
use crate::krylov::KrylovConfig;
use crate::operators::{energy, middle_layer, skyrmion_number};
use crate::params::DimensionlessParams;
use crate::spline::spline_weights;
use crate::stepper::{step, Dynamics, SolverState};

/// Default tolerance on the per-image energy change between iterations.
pub const STRING_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct PathString {
    /// `N + 1` images; the first and last are fixed.
    pub images: Vec<VectorField>,
    /// Parametrization `a_i`, uniform after each reparametrization.
    pub params: Vec<f64>,
    pub energies: Vec<f64>,
}

impl PathString {
    pub fn intervals(&self) -> usize {
        self.images.len() - 1
    }

    pub fn recompute_energies(&mut self, params: &DimensionlessParams, drive: &DriveSpec) {
        self.energies = self
            .images
            .par_iter()
            .map(|m| energy(m, params, drive.uniform_field))
            .collect();
    }

    pub fn charges(&self) -> Vec<f64> {
        self.images
            .iter()
            .map(|m| skyrmion_number(m, middle_layer(m.grid())))
            .collect()
    }
}

fn uniform_params(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

/// Fixed replacement direction for a cell whose interpolant vanishes: any unit
/// vector orthogonal to the first endpoint.
fn tie_break(a: [f64; 3]) -> [f64; 3] {
    let e = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let t = cross(a, e);
    let n = norm(t);
    [t[0] / n, t[1] / n, t[2] / n]
}

/// Linear interpolation between the endpoints at `a_i = i / N`, projected.
pub fn init_string(
    end_a: &VectorField,
    end_b: &VectorField,
    n: usize,
    params: &DimensionlessParams,
    drive: &DriveSpec,
) -> Result<PathString> {
    end_a.grid().ensure_same(end_b.grid())?;
    if n == 0 {
        return Err(Error::InvalidArgument("a string needs at least one interval".into()));
    }
    let a = uniform_params(n);
    let mut images = Vec::with_capacity(n + 1);
    images.push(end_a.clone());
    for &t in &a[1..n] {
        let mut img = end_a.lincomb(1.0 - t, end_b, t);
        for c in 0..img.cells() {
            let v = img.get(c);
            if norm(v) < 1e-8 {
                img.set(c, tie_break(end_a.get(c)));
            }
        }
        img.project_in_place()?;
        images.push(img);
    }
    if n >= 1 {
        images.push(end_b.clone());
    }
    let mut s = PathString {
        images,
        params: a,
        energies: Vec::new(),
    };
    s.recompute_energies(params, drive);
    Ok(s)
}

/// Advance every interior image by `inner_steps` heat-flow steps from a fresh history.
pub fn evolve_images(
    s: &mut PathString,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    dt: f64,
    inner_steps: usize,
    krylov: &KrylovConfig,
) -> Result<()> {
    let n = s.intervals();
    if n < 2 {
        return Ok(());
    }
    s.images[1..n]
        .par_iter_mut()
        .enumerate()
        .try_for_each(|(offset, img)| -> Result<()> {
            let wrap = |e: Error| Error::Image {
                image: offset + 1,
                source: Box::new(e),
            };
            let mut state = SolverState::new(img.clone(), dt, Dynamics::HeatFlow, params, drive)
                .map_err(wrap)?;
            for _ in 0..inner_steps {
                step(&mut state, params, drive, krylov).map_err(wrap)?;
            }
            *img = state.m_curr;
            Ok(())
        })?;
    Ok(())
}

/// Normalized cumulative arc length `s_i / s_N`, distances in the volume-weighted L2 norm.
pub fn arc_length_params(s: &PathString) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; s.images.len()];
    for i in 1..s.images.len() {
        acc[i] = acc[i - 1] + s.images[i].l2_distance(&s.images[i - 1]);
    }
    let total = *acc.last().unwrap_or(&0.0);
    if !(total > 0.0) {
        return Err(Error::DegenerateString);
    }
    Ok(acc.iter().map(|v| v / total).collect())
}

/// Redistribute interior images to uniform arc length and project. Endpoints are
/// left bitwise untouched.
pub fn reparametrize(s: &mut PathString) -> Result<()> {
    let n = s.intervals();
    let knots = arc_length_params(s)?;
    if knots.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::DegenerateString);
    }
    let targets = uniform_params(n);
    let weights = spline_weights(&knots, &targets)?;
    let grid = *s.images[0].grid();
    let len = 3 * grid.cells();
    let fresh: Vec<VectorField> = (1..n)
        .into_par_iter()
        .map(|j| -> Result<VectorField> {
            let mut data = vec![0.0; len];
            for (i, w) in weights[j].iter().enumerate() {
                if *w == 0.0 {
                    continue;
                }
                for (d, v) in data.iter_mut().zip(s.images[i].as_slice()) {
                    *d += w * v;
                }
            }
            let mut img = VectorField::from_data(grid, data)?;
            img.project_in_place().map_err(|e| Error::Image {
                image: j,
                source: Box::new(e),
            })?;
            Ok(img)
        })
        .collect::<Result<_>>()?;
    for (j, img) in fresh.into_iter().enumerate() {
        s.images[j + 1] = img;
    }
    s.params = targets;
    Ok(())
}

/// `max_i |curr_i - prev_i| <= tol`.
pub fn string_converged(prev: &[f64], curr: &[f64], tol: f64) -> bool {
    assert_eq!(prev.len(), curr.len(), "energy vectors differ in length");
    prev.iter()
        .zip(curr)
        .all(|(a, b)| (b - a).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StringSchedule {
    /// Heat-flow step for image evolution (dimensionless).
    pub dt: f64,
    pub inner_steps: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub krylov: KrylovConfig,
}

impl StringSchedule {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            inner_steps: 1,
            tolerance: STRING_TOLERANCE,
            max_iterations: 10_000,
            krylov: KrylovConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MepReport {
    pub string: PathString,
    pub charges: Vec<f64>,
    /// Strict interior local maxima of the energy profile (saddle candidates).
    pub maxima: Vec<usize>,
    /// Strict interior local minima (metastable states).
    pub minima: Vec<usize>,
    pub converged: bool,
    pub iterations: usize,
    /// `max_i |dI_i|` after each iteration.
    pub residuals: Vec<f64>,
}

/// Strict interior local maxima and minima of `e`.
pub fn interior_extrema(e: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let mut maxima = Vec::new();
    let mut minima = Vec::new();
    for i in 1..e.len().saturating_sub(1) {
        if e[i] > e[i - 1] && e[i] > e[i + 1] {
            maxima.push(i);
        } else if e[i] < e[i - 1] && e[i] < e[i + 1] {
            minima.push(i);
        }
    }
    (maxima, minima)
}

/// Iterate evolve, reparametrize until the energy profile settles.
///
/// `observer` is called after every iteration with the iteration count and the string.
pub fn run_string(
    mut s: PathString,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    schedule: &StringSchedule,
    mut observer: impl FnMut(usize, &PathString, f64),
) -> Result<MepReport> {
    schedule.krylov.validate()?;
    if s.energies.len() != s.images.len() {
        s.recompute_energies(params, drive);
    }
    let mut residuals = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    if s.intervals() < 2 {
        converged = true;
    }
    while !converged && iterations < schedule.max_iterations {
        let prev = s.energies.clone();
        evolve_images(&mut s, params, drive, schedule.dt, schedule.inner_steps, &schedule.krylov)?;
        match reparametrize(&mut s) {
            Ok(()) => {}
            Err(Error::DegenerateString) => {}
            Err(e) => return Err(e),
        }
        s.recompute_energies(params, drive);
        iterations += 1;
        let r = prev
            .iter()
            .zip(&s.energies)
            .map(|(a, b)| (b - a).abs())
            .fold(0.0, f64::max);
        residuals.push(r);
        converged = string_converged(&prev, &s.energies, schedule.tolerance);
        observer(iterations, &s, r);
    }
    let (maxima, minima) = interior_extrema(&s.energies);
    Ok(MepReport {
        charges: s.charges(),
        string: s,
        maxima,
        minima,
        converged,
        iterations,
        residuals,
    })
}
