//! Effective field `h = eps Lap m - kappa curl m + hhat`.
//!
//! `hhat` collects everything treated explicitly by the time steppers: anisotropy,
//! Zeeman fields and spin-transfer torque. The stray field is not modeled.

use crate::drive::DriveSpec;
use crate::field::{cross, Vec3, VectorField};
use crate::ghost::fill_ghosts;
use crate::operators::{directional_derivative, exchange_dmi_field};
use crate::params::DimensionlessParams;

/// Explicit part of the local field at time `t`.
pub fn local_field_hhat(
    field: &VectorField,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    t: f64,
) -> VectorField {
    let grid = *field.grid();
    let mut out = VectorField::zeros(grid);
    let locals: Vec<_> = drive.active_local_fields(t).collect();
    for k in 0..grid.nz {
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let c = grid.index(i, j, k);
                let m = field.get(c);
                let mut h: Vec3 = [
                    drive.uniform_field[0],
                    drive.uniform_field[1] - params.q * m[1],
                    drive.uniform_field[2] - params.q * m[2],
                ];
                if !locals.is_empty() {
                    let x = grid.center(i, j, k);
                    for f in locals.iter().filter(|f| f.covers(x, t)) {
                        for a in 0..3 {
                            h[a] += f.field[a];
                        }
                    }
                }
                out.set(c, h);
            }
        }
    }

    let currents: Vec<_> = drive.active_currents(t).collect();
    if !currents.is_empty() {
        let gf = fill_ghosts(field, params.kappa_b);
        for cur in currents {
            let adv = directional_derivative(&gf, cur.direction);
            for c in 0..grid.cells() {
                let m = field.get(c);
                let d = adv.get(c);
                let mxd = cross(m, d);
                let mut h = out.get(c);
                for a in 0..3 {
                    h[a] += cur.beta * (mxd[a] + cur.xi * d[a]);
                }
                out.set(c, h);
            }
        }
    }
    out
}

/// The stiff part `eps Lap m - kappa curl m` with chiral ghosts; linear in `field`.
pub fn stiff_field(field: &VectorField, params: &DimensionlessParams) -> VectorField {
    let gf = fill_ghosts(field, params.kappa_b);
    exchange_dmi_field(&gf, params.eps, params.kappa)
}

/// Full effective field at time `t`.
pub fn effective_field(
    field: &VectorField,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    t: f64,
) -> VectorField {
    let mut h = stiff_field(field, params);
    h.axpy(1.0, &local_field_hhat(field, params, drive, t));
    h
}

/// Energy with the static uniform field of `drive`. Local fields and currents are
/// dynamic perturbations and do not enter the energy.
pub fn energy(field: &VectorField, params: &DimensionlessParams, drive: &DriveSpec) -> f64 {
    crate::operators::energy(field, params, drive.uniform_field)
}
