//! Initial magnetization states.
//!
//! Random draws use ChaCha8 seeded from the scenario seed with stream
//! [`RANDOM_CIRCLE_STREAM`]; cells inside the circle draw one point on the sphere
//! each, in storage order (x fastest, then y, then z).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use skyrmag::{snapshot, Grid, VectorField};

use crate::config::{InitKind, RandomCircle};
use crate::error::CliError;

pub const RANDOM_CIRCLE_STREAM: u64 = 1;

fn nm(grid: &Grid, x: f64) -> f64 {
    x * 1e-9 / grid.length_scale
}

fn unit(v: [f64; 3], field: &str) -> Result<[f64; 3], CliError> {
    let n = skyrmag::field::norm(v);
    if !(n > 0.0 && n.is_finite()) {
        return Err(CliError::Config {
            field: field.into(),
            message: "direction must be nonzero".into(),
        });
    }
    Ok(v.map(|x| x / n))
}

/// Reversed rectangles on a uniform background, laid out `layout[0] x layout[1]`
/// and centered in-plane.
pub fn init_blocks(
    grid: Grid,
    block_nm: [f64; 2],
    spacing_nm: f64,
    layout: [usize; 2],
    background: [f64; 3],
) -> Result<VectorField, CliError> {
    let bg = unit(background, "init.background")?;
    let mut f = VectorField::uniform(grid, bg).map_err(CliError::solver("init"))?;
    let ext = grid.extent();
    let mut origin = [0.0; 2];
    for a in 0..2 {
        if layout[a] == 0 {
            return Ok(f);
        }
        let n = layout[a] as f64;
        let total = nm(&grid, n * block_nm[a] + (n - 1.0) * spacing_nm);
        if total > ext[a] * (1.0 + 1e-12) {
            return Err(CliError::Config {
                field: "init.layout".into(),
                message: format!(
                    "{} blocks of {} nm with {} nm spacing do not fit the sample",
                    layout[a], block_nm[a], spacing_nm
                ),
            });
        }
        origin[a] = 0.5 * (ext[a] - total);
    }
    let (bw, sp) = ([nm(&grid, block_nm[0]), nm(&grid, block_nm[1])], nm(&grid, spacing_nm));
    // closed intervals, with a round-off allowance for centers exactly on an edge
    let tol = 1e-9 * grid.hx.min(grid.hy);
    let inside = |x: f64, a: usize| {
        (0..layout[a]).any(|b| {
            let lo = origin[a] + b as f64 * (bw[a] + sp);
            x >= lo - tol && x <= lo + bw[a] + tol
        })
    };
    let rev = bg.map(|x| -x);
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let x = grid.center(i, j, k);
                if inside(x[0], 0) && inside(x[1], 1) {
                    f.set(grid.index(i, j, k), rev);
                }
            }
        }
    }
    Ok(f)
}

fn in_plane_center(grid: &Grid, center_nm: Option<[f64; 2]>) -> [f64; 2] {
    match center_nm {
        Some(c) => [nm(grid, c[0]), nm(grid, c[1])],
        None => {
            let e = grid.extent();
            [0.5 * e[0], 0.5 * e[1]]
        }
    }
}

/// Reversed annulus `inner <= r <= outer` through the full thickness.
pub fn init_ring(
    grid: Grid,
    center_nm: Option<[f64; 2]>,
    inner_nm: f64,
    outer_nm: f64,
    background: [f64; 3],
) -> Result<VectorField, CliError> {
    let bg = unit(background, "init.background")?;
    let c = in_plane_center(&grid, center_nm);
    let (r0, r1) = (nm(&grid, inner_nm), nm(&grid, outer_nm));
    Ok(VectorField::from_fn(grid, |x| {
        let r = (x[0] - c[0]).hypot(x[1] - c[1]);
        if r >= r0 && r <= r1 {
            bg.map(|v| -v)
        } else {
            bg
        }
    }))
}

/// Replace every cell whose in-plane center lies within `radius_nm` of the center
/// by an independent uniform random unit vector.
pub fn init_random_circle(base: &VectorField, circle: &RandomCircle, seed: u64) -> VectorField {
    let grid = *base.grid();
    let c = in_plane_center(&grid, circle.center_nm);
    let r = nm(&grid, circle.radius_nm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(RANDOM_CIRCLE_STREAM);
    let mut out = base.clone();
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let x = grid.center(i, j, k);
                if (x[0] - c[0]).hypot(x[1] - c[1]) <= r {
                    let v: [f64; 3] = UnitSphere.sample(&mut rng);
                    out.set(grid.index(i, j, k), v);
                }
            }
        }
    }
    out
}

pub fn load_snapshot(path: &std::path::Path, grid: &Grid) -> Result<VectorField, CliError> {
    let bytes = std::fs::read(path).map_err(CliError::io(path))?;
    let f = snapshot::decode(&bytes)
        .and_then(|s| s.into_vector())
        .map_err(CliError::solver(format!("snapshot {}", path.display())))?;
    if f.grid().dims() != grid.dims() {
        return Err(CliError::Config {
            field: "init.path".into(),
            message: format!(
                "snapshot grid {:?} does not match the configured grid {:?}",
                f.grid().dims(),
                grid.dims()
            ),
        });
    }
    f.project().map_err(CliError::solver("snapshot"))
}

pub fn build(
    kind: &InitKind,
    circle: Option<&RandomCircle>,
    grid: Grid,
    seed: u64,
) -> Result<VectorField, CliError> {
    let base = match kind {
        InitKind::Uniform { direction } => {
            VectorField::uniform(grid, unit(*direction, "init.direction")?).map_err(CliError::solver("init"))?
        }
        InitKind::Blocks {
            block_nm,
            spacing_nm,
            layout,
            background,
        } => init_blocks(grid, *block_nm, *spacing_nm, *layout, *background)?,
        InitKind::Ring {
            center_nm,
            inner_radius_nm,
            outer_radius_nm,
            background,
        } => init_ring(grid, *center_nm, *inner_radius_nm, *outer_radius_nm, *background)?,
        InitKind::Snapshot { path } => load_snapshot(path, &grid)?,
    };
    Ok(match circle {
        Some(c) => init_random_circle(&base, c, seed),
        None => base,
    })
}
