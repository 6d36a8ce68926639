//! Semi-implicit BDF projection integrators.
//!
//! The stiff linear part `L m = eps Lap m - kappa curl m` is treated implicitly with
//! the torque direction frozen at the extrapolated `m_hat = 2 m^n - m^{n-1}`; every
//! other field contribution is extrapolated from stored levels. Each step solves
//!
//! ```text
//! lead x + g m_hat x (L x) + d m_hat x (m_hat x L x) = r
//! ```
//!
//! and projects `x` onto the unit sphere. Landau-Lifshitz uses `g = 1, d = alpha`,
//! the harmonic map heat flow `g = 0, d = 1`. BDF2 has `lead = 3 / (2 dt)`; the
//! BDF1 start-up step has `lead = 1 / dt` and `m_hat = m^n`.

use crate::drive::DriveSpec;
use crate::effective::{local_field_hhat, stiff_field};
use crate::error::{Error, Result};
use crate::field::{cross, Vec3, VectorField};
use crate::krylov::{gmres, KrylovConfig, KrylovStats};
use crate::operators::{energy, middle_layer, skyrmion_number};
use crate::params::DimensionlessParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    LandauLifshitz,
    HeatFlow,
}

impl Dynamics {
    /// Coefficients `(g, d)` of the precession and damping terms.
    pub fn coefficients(self, alpha: f64) -> (f64, f64) {
        match self {
            Dynamics::LandauLifshitz => (1.0, alpha),
            Dynamics::HeatFlow => (0.0, 1.0),
        }
    }
}

/// Integrator history. Time is `step * dt`, never accumulated.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub m_curr: VectorField,
    pub m_prev: Option<VectorField>,
    pub hhat_curr: VectorField,
    pub hhat_prev: Option<VectorField>,
    pub step: u64,
    pub dt: f64,
    pub dynamics: Dynamics,
}

impl SolverState {
    /// Fresh state at `t = 0`; `hhat^0` is evaluated on `m0` at time zero.
    pub fn new(
        m0: VectorField,
        dt: f64,
        dynamics: Dynamics,
        params: &DimensionlessParams,
        drive: &DriveSpec,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
        }
        let m0 = m0.project()?;
        let hhat_curr = local_field_hhat(&m0, params, drive, 0.0);
        Ok(Self {
            m_curr: m0,
            m_prev: None,
            hhat_curr,
            hhat_prev: None,
            step: 0,
            dt,
            dynamics,
        })
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn has_history(&self) -> bool {
        self.m_prev.is_some() && self.hhat_prev.is_some()
    }

    /// Drop the second history level so the next step is BDF1.
    pub fn reset_history(&mut self) {
        self.m_prev = None;
        self.hhat_prev = None;
    }
}

/// The implicit operator of one step, linear in its argument.
#[derive(Debug, Clone, Copy)]
pub struct ImplicitOperator<'a> {
    pub m_hat: &'a VectorField,
    pub params: &'a DimensionlessParams,
    pub lead: f64,
    pub dynamics: Dynamics,
}

impl ImplicitOperator<'_> {
    pub fn apply(&self, x: &VectorField) -> VectorField {
        let lx = stiff_field(x, self.params);
        let (g, d) = self.dynamics.coefficients(self.params.alpha);
        let mut out = VectorField::zeros(*x.grid());
        for c in 0..x.cells() {
            let mh = self.m_hat.get(c);
            let l = lx.get(c);
            let t = torque(mh, l, g, d);
            let xv = x.get(c);
            out.set(
                c,
                [
                    self.lead * xv[0] + t[0],
                    self.lead * xv[1] + t[1],
                    self.lead * xv[2] + t[2],
                ],
            );
        }
        out
    }
}

/// `g m x v + d m x (m x v)`.
#[inline]
fn torque(m: Vec3, v: Vec3, g: f64, d: f64) -> Vec3 {
    let mv = cross(m, v);
    let mmv = cross(m, mv);
    [
        g * mv[0] + d * mmv[0],
        g * mv[1] + d * mmv[1],
        g * mv[2] + d * mmv[2],
    ]
}

/// Left-hand side of the BDF2 system applied to `x`.
pub fn apply_operator(
    x: &VectorField,
    m_hat: &VectorField,
    params: &DimensionlessParams,
    dt: f64,
    dynamics: Dynamics,
) -> VectorField {
    ImplicitOperator {
        m_hat,
        params,
        lead: 1.5 / dt,
        dynamics,
    }
    .apply(x)
}

/// Explicit part of the field at the levels used by the next step.
fn hhat_levels(
    state: &SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
) -> (VectorField, Option<VectorField>) {
    if drive.is_static() {
        (state.hhat_curr.clone(), state.hhat_prev.clone())
    } else {
        let t_next = (state.step + 1) as f64 * state.dt;
        (
            local_field_hhat(&state.m_curr, params, drive, t_next),
            state
                .m_prev
                .as_ref()
                .map(|m| local_field_hhat(m, params, drive, t_next)),
        )
    }
}

/// `m_hat = 2 m^n - m^{n-1}` and `h_tilde = 2 hhat^n - hhat^{n-1}`.
pub fn extrapolate(
    state: &SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
) -> Result<(VectorField, VectorField)> {
    let prev = state
        .m_prev
        .as_ref()
        .ok_or_else(|| Error::State("BDF2 needs two history levels; take a BDF1 step first".into()))?;
    let (h_curr, h_prev) = hhat_levels(state, params, drive);
    let h_prev = h_prev.ok_or_else(|| Error::State("missing cached field history".into()))?;
    Ok((
        state.m_curr.lincomb(2.0, prev, -1.0),
        h_curr.lincomb(2.0, &h_prev, -1.0),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub krylov: KrylovStats,
    /// 1 or 2.
    pub order: u8,
}

fn solve_and_commit(
    state: &mut SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    krylov: &KrylovConfig,
    m_hat: &VectorField,
    h_tilde: &VectorField,
    history: VectorField,
    lead: f64,
    order: u8,
) -> Result<StepStats> {
    let (g, d) = state.dynamics.coefficients(params.alpha);
    let grid = *state.m_curr.grid();
    let mut rhs = history;
    for c in 0..grid.cells() {
        let t = torque(m_hat.get(c), h_tilde.get(c), g, d);
        let r = rhs.get(c);
        rhs.set(c, [r[0] - t[0], r[1] - t[1], r[2] - t[2]]);
    }

    let op = ImplicitOperator {
        m_hat,
        params,
        lead,
        dynamics: state.dynamics,
    };
    let mut x = m_hat.as_slice().to_vec();
    let mut scratch = VectorField::zeros(grid);
    let stats = gmres(
        |v, out| {
            scratch.as_mut_slice().copy_from_slice(v);
            out.copy_from_slice(op.apply(&scratch).as_slice());
        },
        rhs.as_slice(),
        &mut x,
        1.0 / lead,
        krylov,
    )?;

    let mut m_next = VectorField::from_data(grid, x)?;
    m_next.project_in_place()?;
    let t_next = (state.step + 1) as f64 * state.dt;
    let h_next = local_field_hhat(&m_next, params, drive, t_next);

    state.m_prev = Some(std::mem::replace(&mut state.m_curr, m_next));
    state.hhat_prev = Some(std::mem::replace(&mut state.hhat_curr, h_next));
    state.step += 1;
    Ok(StepStats {
        krylov: stats,
        order,
    })
}

/// First-order start-up step: `m_hat = m^n`, `h_tilde = hhat^n`.
pub fn bdf1_step(
    state: &mut SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    krylov: &KrylovConfig,
) -> Result<StepStats> {
    let lead = 1.0 / state.dt;
    let (h_curr, _) = hhat_levels(state, params, drive);
    let m_hat = state.m_curr.clone();
    let mut history = state.m_curr.clone();
    history.scale(lead);
    solve_and_commit(state, params, drive, krylov, &m_hat, &h_curr, history, lead, 1)
}

/// Second-order step; errors if only one history level exists.
pub fn bdf2_step(
    state: &mut SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    krylov: &KrylovConfig,
) -> Result<StepStats> {
    let (m_hat, h_tilde) = extrapolate(state, params, drive)?;
    let dt = state.dt;
    let prev = state.m_prev.as_ref().expect("checked by extrapolate");
    let history = state.m_curr.lincomb(4.0 / (2.0 * dt), prev, -1.0 / (2.0 * dt));
    solve_and_commit(state, params, drive, krylov, &m_hat, &h_tilde, history, 1.5 / dt, 2)
}

/// BDF1 when history is missing, otherwise BDF2.
pub fn step(
    state: &mut SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    krylov: &KrylovConfig,
) -> Result<StepStats> {
    if state.has_history() {
        bdf2_step(state, params, drive, krylov)
    } else {
        bdf1_step(state, params, drive, krylov)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub step: u64,
    /// Dimensionless time.
    pub time: f64,
    pub energy: f64,
    pub average: Vec3,
    pub charge: f64,
}

impl TraceRecord {
    pub fn measure(state: &SolverState, params: &DimensionlessParams, drive: &DriveSpec) -> Self {
        let m = &state.m_curr;
        Self {
            step: state.step,
            time: state.time(),
            energy: energy(m, params, drive.uniform_field),
            average: m.spatial_average(),
            charge: skyrmion_number(m, middle_layer(m.grid())),
        }
    }
}

/// True when consecutive energies agree to `1e-9` relative, or `1e-18` absolute.
pub fn energy_converged(previous: f64, current: f64) -> bool {
    let delta = (current - previous).abs();
    delta < 1e-18 || delta < 1e-9 * previous.abs()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyOutcome {
    pub converged: bool,
    pub steps: u64,
    pub energy: f64,
    pub trace: Vec<TraceRecord>,
}

/// Step until the energy criterion holds or `max_steps` steps have been taken.
///
/// The trace holds the initial state, every `stride`-th step and the final step.
pub fn run_to_steady(
    state: &mut SolverState,
    params: &DimensionlessParams,
    drive: &DriveSpec,
    krylov: &KrylovConfig,
    max_steps: u64,
    stride: u64,
) -> Result<SteadyOutcome> {
    let stride = stride.max(1);
    let mut trace = vec![TraceRecord::measure(state, params, drive)];
    let mut last = trace[0].energy;
    let start = state.step;
    let mut converged = false;
    while state.step - start < max_steps {
        step(state, params, drive, krylov)?;
        let e = energy(&state.m_curr, params, drive.uniform_field);
        converged = energy_converged(last, e);
        last = e;
        let taken = state.step - start;
        if taken % stride == 0 || converged || taken == max_steps {
            trace.push(TraceRecord::measure(state, params, drive));
        }
        if converged {
            break;
        }
    }
    Ok(SteadyOutcome {
        converged,
        steps: state.step - start,
        energy: last,
        trace,
    })
}
