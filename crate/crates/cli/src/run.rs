//! The four run modes: relax, evolve, string and postprocess.

use std::path::{Path, PathBuf};

use skyrmag::mep::{init_string, run_string, StringSchedule};
use skyrmag::operators::{energy, energy_density_maps, middle_layer, skyrmion_number};
use skyrmag::stepper::{energy_converged, run_to_steady, step, TraceRecord};
use skyrmag::{DimensionlessParams, DriveSpec, Dynamics, KrylovConfig, PhysicalParams, SolverState, VectorField};

use crate::checkpoint::{Checkpoint, RngState};
use crate::config::{DynamicsKind, ScenarioConfig};
use crate::error::CliError;
use crate::init::{self, RANDOM_CIRCLE_STREAM};
use crate::output::{self, MepRow, StringSummary, Summary, TraceWriter};

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub snapshot_stride: Option<u64>,
    pub trace_stride: Option<u64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ScenarioConfig) {
        if let Some(o) = &self.output {
            cfg.output.directory = o.clone();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(s) = self.snapshot_stride {
            cfg.output.snapshot_stride = s;
        }
        if let Some(s) = self.trace_stride {
            cfg.output.trace_stride = s;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Relax,
    Evolve,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Relax => "relax",
            Mode::Evolve => "evolve",
        }
    }
}

struct Setup {
    physical: PhysicalParams,
    params: DimensionlessParams,
    drive: DriveSpec,
    krylov: KrylovConfig,
}

fn setup(cfg: &ScenarioConfig) -> Result<Setup, CliError> {
    let (physical, params) = cfg.params()?;
    Ok(Setup {
        drive: cfg.drive_spec(&physical),
        krylov: cfg.krylov_config(),
        physical,
        params,
    })
}

fn summary(mode: &str, s: &Setup, m: &VectorField, steps: u64, converged: bool, time_ps: f64) -> Summary {
    let e = energy(m, &s.params, s.drive.uniform_field);
    Summary {
        mode: mode.into(),
        steps,
        converged,
        time_ps,
        energy: e,
        energy_j: e * s.physical.energy_scale(),
        m_average: m.spatial_average(),
        charge: skyrmion_number(m, middle_layer(m.grid())),
        string: None,
    }
}

/// Relax or evolve one state, writing trace, snapshots, checkpoints and a summary
/// into the output directory.
pub fn run_dynamics(cfg: &ScenarioConfig, mode: Mode, resume: Option<&Path>) -> Result<Summary, CliError> {
    let s = setup(cfg)?;
    let kind = cfg.dynamics_kind(match mode {
        Mode::Relax => DynamicsKind::HeatFlow,
        Mode::Evolve => DynamicsKind::Ll,
    });
    let steady = cfg.dynamics.steady_state.unwrap_or(mode == Mode::Relax);
    let dt_ps = cfg.dynamics.dt_ps;
    let dt = s.physical.time_to_dimensionless(dt_ps);
    let hash = cfg.physics_hash();
    let rng = RngState {
        seed: cfg.seed,
        stream: RANDOM_CIRCLE_STREAM,
        word_pos: 0,
    };

    let mut state = match resume {
        Some(path) => {
            let ck = Checkpoint::load(path, &hash)?;
            if ck.state.m_curr.grid().dims() != cfg.grid()?.dims() {
                return Err(CliError::Checkpoint("grid differs from the scenario".into()));
            }
            ck.state
        }
        None => {
            let m0 = init::build(&cfg.init, cfg.random_circle.as_ref(), cfg.grid()?, cfg.seed)?;
            SolverState::new(m0, dt, Dynamics::from(kind), &s.params, &s.drive)
                .map_err(CliError::solver("initial state"))?
        }
    };

    let out = &cfg.output;
    output::ensure_dir(&out.directory)?;
    let mut trace = TraceWriter::open(
        &out.directory.join("trace.csv"),
        dt_ps,
        s.physical.energy_scale(),
        resume.is_some(),
    )?;
    let first = TraceRecord::measure(&state, &s.params, &s.drive);
    if resume.is_none() {
        trace.record(&first)?;
    }
    let ckpt_path = out.directory.join("checkpoint.ckpt");
    let save = |st: &SolverState| {
        Checkpoint {
            config_hash: hash,
            rng,
            state: st.clone(),
        }
        .save(&ckpt_path)
    };

    let mut last = first.energy;
    let mut converged = false;
    let trace_stride = out.trace_stride.max(1);
    while state.step < cfg.dynamics.max_steps {
        step(&mut state, &s.params, &s.drive, &s.krylov)
            .map_err(|e| CliError::Solver {
                context: format!("step {}", state.step + 1),
                source: e,
            })?;
        let rec = TraceRecord::measure(&state, &s.params, &s.drive);
        converged = steady && energy_converged(last, rec.energy);
        last = rec.energy;
        let n = state.step;
        if n % trace_stride == 0 || converged || n == cfg.dynamics.max_steps {
            trace.record(&rec)?;
        }
        if out.snapshot_stride > 0 && n % out.snapshot_stride == 0 {
            output::write_vector(&out.directory, &format!("m_{n:07}"), &state.m_curr, out.vtk)?;
        }
        if out.checkpoint_stride > 0 && n % out.checkpoint_stride == 0 {
            save(&state)?;
        }
        if converged {
            break;
        }
    }
    trace.flush()?;
    output::write_vector(&out.directory, "final", &state.m_curr, out.vtk)?;
    save(&state)?;
    let sum = summary(
        mode.name(),
        &s,
        &state.m_curr,
        state.step,
        converged,
        state.step as f64 * dt_ps,
    );
    sum.write(&out.directory)?;
    Ok(sum)
}

fn relax_endpoint(
    m: VectorField,
    cfg: &ScenarioConfig,
    s: &Setup,
    dt: f64,
    label: &str,
) -> Result<VectorField, CliError> {
    let mut st = SolverState::new(m, dt, Dynamics::HeatFlow, &s.params, &s.drive)
        .map_err(CliError::solver(format!("{label} endpoint")))?;
    run_to_steady(&mut st, &s.params, &s.drive, &s.krylov, cfg.dynamics.max_steps, u64::MAX)
        .map_err(CliError::solver(format!("relaxing {label} endpoint")))?;
    Ok(st.m_curr)
}

/// Minimum energy path between the configured endpoints.
pub fn run_mep(cfg: &ScenarioConfig) -> Result<Summary, CliError> {
    let sc = cfg.string.as_ref().ok_or_else(|| CliError::Config {
        field: "string".into(),
        message: "the string mode needs a [string] section".into(),
    })?;
    let s = setup(cfg)?;
    let grid = cfg.grid()?;
    let dt = s.physical.time_to_dimensionless(sc.dt_ps.unwrap_or(cfg.dynamics.dt_ps));
    let mut a = init::build(&sc.start, None, grid, cfg.seed)?;
    let mut b = init::build(&sc.end, None, grid, cfg.seed)?;
    if sc.relax_endpoints {
        a = relax_endpoint(a, cfg, &s, dt, "start")?;
        b = relax_endpoint(b, cfg, &s, dt, "end")?;
    }
    let string = init_string(&a, &b, sc.images, &s.params, &s.drive).map_err(CliError::solver("string"))?;
    let schedule = StringSchedule {
        dt,
        inner_steps: sc.inner_steps,
        tolerance: sc.tolerance,
        max_iterations: sc.max_iterations,
        krylov: s.krylov,
    };
    let out = &cfg.output;
    output::ensure_dir(&out.directory)?;
    let mut residuals = Vec::new();
    let report = run_string(string, &s.params, &s.drive, &schedule, |it, _, r| residuals.push((it, r)))
        .map_err(CliError::solver("string method"))?;

    let scale = s.physical.energy_scale();
    let st = &report.string;
    let rows: Vec<MepRow> = (0..st.images.len())
        .map(|i| MepRow {
            image: i,
            a: st.params[i],
            energy: st.energies[i],
            energy_j: st.energies[i] * scale,
            charge: report.charges[i],
            label: if i == 0 || i + 1 == st.images.len() {
                "endpoint"
            } else if report.maxima.contains(&i) {
                "maximum"
            } else if report.minima.contains(&i) {
                "minimum"
            } else {
                ""
            },
        })
        .collect();
    output::write_mep_csv(&out.directory.join("mep.csv"), &rows)?;
    let rpath = out.directory.join("mep_residuals.csv");
    let text: String = std::iter::once("iteration,residual\n".to_string())
        .chain(residuals.iter().map(|(i, r)| format!("{i},{r}\n")))
        .collect();
    std::fs::write(&rpath, text).map_err(CliError::io(&rpath))?;
    for (i, img) in st.images.iter().enumerate() {
        output::write_vector(&out.directory, &format!("image_{i:03}"), img, out.vtk)?;
    }

    let e0 = st.energies[0];
    let top = report
        .maxima
        .iter()
        .map(|&i| st.energies[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut sum = summary("string", &s, &st.images[0], 0, report.converged, 0.0);
    sum.string = Some(StringSummary {
        iterations: report.iterations,
        maxima: report.maxima.clone(),
        minima: report.minima.clone(),
        barrier_j: if top.is_finite() { (top - e0) * scale } else { 0.0 },
    });
    sum.write(&out.directory)?;
    Ok(sum)
}

/// Energy, averages, charge and energy density maps of a stored state.
pub fn postprocess(cfg: &ScenarioConfig, snapshot: Option<&Path>) -> Result<Summary, CliError> {
    let pp = cfg.postprocess.as_ref();
    let path = snapshot
        .map(Path::to_path_buf)
        .or_else(|| pp.map(|p| p.snapshot.clone()))
        .ok_or_else(|| CliError::Config {
            field: "postprocess.snapshot".into(),
            message: "no snapshot given".into(),
        })?;
    let s = setup(cfg)?;
    let m = init::load_snapshot(&path, &cfg.grid()?)?;
    let layer = pp.and_then(|p| p.layer).unwrap_or_else(|| middle_layer(m.grid()));
    if layer >= m.grid().nz {
        return Err(CliError::Config {
            field: "postprocess.layer".into(),
            message: format!("layer {layer} outside 0..{}", m.grid().nz),
        });
    }
    let out = &cfg.output;
    output::ensure_dir(&out.directory)?;
    let maps = energy_density_maps(&m, &s.params, s.drive.uniform_field);
    output::write_scalar(&out.directory, "density_local", &maps.local, out.vtk)?;
    output::write_scalar(&out.directory, "density_dmi", &maps.dmi, out.vtk)?;
    output::write_scalar(&out.directory, "density_total", &maps.total, out.vtk)?;
    let mut sum = summary("postprocess", &s, &m, 0, true, 0.0);
    sum.charge = skyrmion_number(&m, layer);
    sum.write(&out.directory)?;
    Ok(sum)
}
