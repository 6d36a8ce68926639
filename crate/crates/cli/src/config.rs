//! Scenario configuration.
//!
//! TOML with physical units spelled out in key names. Every section except
//! `[geometry]` is optional and defaults to the FeGe material, heat-flow
//! relaxation from the uniform `+z` state and no drives.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skyrmag::drive::{CurrentDrive, DriveSpec, LocalField};
use skyrmag::{nondimensionalize, DimensionlessParams, Dynamics, Grid, KrylovConfig, PhysicalParams};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    pub geometry: Geometry,
    #[serde(default)]
    pub material: Material,
    #[serde(default)]
    pub dynamics: DynamicsConfig,
    #[serde(default)]
    pub krylov: KrylovSection,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub init: InitKind,
    /// Randomized disc applied after `init`.
    #[serde(default)]
    pub random_circle: Option<RandomCircle>,
    #[serde(default)]
    pub string: Option<StringConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub postprocess: Option<PostprocessConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub size_nm: [f64; 3],
    pub mesh_nm: [f64; 3],
    /// Defaults to the sample extent along x.
    #[serde(default)]
    pub length_scale_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Material {
    pub exchange_j_per_m: f64,
    pub dmi_j_per_m2: f64,
    pub ms_a_per_m: f64,
    #[serde(default)]
    pub anisotropy_j_per_m3: f64,
    #[serde(default = "default_gamma")]
    pub gamma_per_s_t: f64,
}

fn default_gamma() -> f64 {
    skyrmag::params::GAMMA_E
}

impl Default for Material {
    fn default() -> Self {
        let p = PhysicalParams::fege(1.0, 1.0);
        Self {
            exchange_j_per_m: p.exchange,
            dmi_j_per_m2: p.dmi,
            ms_a_per_m: p.ms,
            anisotropy_j_per_m3: p.anisotropy,
            gamma_per_s_t: p.gamma,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicsKind {
    Ll,
    HeatFlow,
}

impl From<DynamicsKind> for Dynamics {
    fn from(k: DynamicsKind) -> Self {
        match k {
            DynamicsKind::Ll => Dynamics::LandauLifshitz,
            DynamicsKind::HeatFlow => Dynamics::HeatFlow,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsConfig {
    /// Defaults to heat flow for `relax` and LL for `evolve`.
    #[serde(default)]
    pub kind: Option<DynamicsKind>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_dt")]
    pub dt_ps: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    /// Stop at the relative energy criterion. Defaults to on for `relax` only.
    #[serde(default)]
    pub steady_state: Option<bool>,
}

fn default_alpha() -> f64 {
    0.6
}
fn default_dt() -> f64 {
    1.0
}
fn default_max_steps() -> u64 {
    10_000
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            kind: None,
            alpha: default_alpha(),
            dt_ps: default_dt(),
            max_steps: default_max_steps(),
            steady_state: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrylovSection {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restart: usize,
}

impl Default for KrylovSection {
    fn default() -> Self {
        let k = KrylovConfig::default();
        Self {
            tolerance: k.tolerance,
            max_iterations: k.max_iterations,
            restart: k.restart,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub uniform_field_t: [f64; 3],
    #[serde(default, rename = "local_field")]
    pub local_fields: Vec<LocalFieldConfig>,
    #[serde(default, rename = "current")]
    pub currents: Vec<CurrentConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalFieldConfig {
    pub field_t: [f64; 3],
    /// Box center at `start_ps`.
    pub center_nm: [f64; 3],
    pub half_width_nm: [f64; 3],
    #[serde(default)]
    pub velocity_m_per_s: [f64; 3],
    #[serde(default)]
    pub start_ps: f64,
    #[serde(default)]
    pub end_ps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurrentConfig {
    /// `u = -bJ`.
    pub u_m_per_s: f64,
    pub direction: [f64; 3],
    #[serde(default)]
    pub xi: f64,
    #[serde(default)]
    pub start_ps: f64,
    #[serde(default)]
    pub end_ps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitKind {
    Uniform {
        direction: [f64; 3],
    },
    /// A `layout[0] x layout[1]` array of reversed blocks, centered in-plane,
    /// through the full thickness.
    Blocks {
        block_nm: [f64; 2],
        spacing_nm: f64,
        layout: [usize; 2],
        #[serde(default = "up")]
        background: [f64; 3],
    },
    /// Reversed annulus `inner <= r <= outer` in a uniform background; `inner = 0`
    /// gives a bubble (skyrmion seed), `inner > 0` a skyrmionium seed.
    Ring {
        #[serde(default)]
        center_nm: Option<[f64; 2]>,
        inner_radius_nm: f64,
        outer_radius_nm: f64,
        #[serde(default = "up")]
        background: [f64; 3],
    },
    Snapshot {
        path: PathBuf,
    },
}

impl Default for InitKind {
    fn default() -> Self {
        InitKind::Uniform { direction: up() }
    }
}

fn up() -> [f64; 3] {
    [0.0, 0.0, 1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCircle {
    #[serde(default)]
    pub center_nm: Option<[f64; 2]>,
    pub radius_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringConfig {
    #[serde(default = "default_images")]
    pub images: usize,
    #[serde(default = "default_string_tol")]
    pub tolerance: f64,
    #[serde(default = "default_string_iters")]
    pub max_iterations: usize,
    /// Heat-flow step of the image evolution; defaults to `dynamics.dt_ps`.
    #[serde(default)]
    pub dt_ps: Option<f64>,
    #[serde(default = "default_inner")]
    pub inner_steps: usize,
    pub start: InitKind,
    pub end: InitKind,
    /// Relax both endpoints by heat flow before building the string.
    #[serde(default = "yes")]
    pub relax_endpoints: bool,
}

fn default_images() -> usize {
    20
}
fn default_string_tol() -> f64 {
    skyrmag::mep::STRING_TOLERANCE
}
fn default_string_iters() -> usize {
    5000
}
fn default_inner() -> usize {
    1
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub directory: PathBuf,
    #[serde(default = "default_trace_stride")]
    pub trace_stride: u64,
    /// 0 writes only the final snapshot.
    #[serde(default)]
    pub snapshot_stride: u64,
    /// 0 writes only the final checkpoint.
    #[serde(default)]
    pub checkpoint_stride: u64,
    #[serde(default = "yes")]
    pub vtk: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_trace_stride() -> u64 {
    10
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_dir(),
            trace_stride: default_trace_stride(),
            snapshot_stride: 0,
            checkpoint_stride: 0,
            vtk: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PostprocessConfig {
    pub snapshot: PathBuf,
    /// 0-based z layer for the charge; defaults to the middle layer.
    #[serde(default)]
    pub layer: Option<usize>,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.to_string(),
        message: message.into(),
    }
}

fn finite3(field: &str, v: [f64; 3]) -> Result<(), CliError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(invalid(field, "components must be finite"))
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let mut cfg = Self::parse(&text)?;
        cfg.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }

    /// Make relative snapshot paths relative to the config file.
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        let fix_init = |i: &mut InitKind| {
            if let InitKind::Snapshot { path } = i {
                fix(path);
            }
        };
        fix_init(&mut self.init);
        if let Some(s) = &mut self.string {
            fix_init(&mut s.start);
            fix_init(&mut s.end);
        }
        if let Some(p) = &mut self.postprocess {
            fix(&mut p.snapshot);
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let g = &self.geometry;
        for a in 0..3 {
            if !(g.size_nm[a] > 0.0 && g.size_nm[a].is_finite()) {
                return Err(invalid("geometry.size_nm", "extents must be positive"));
            }
            if !(g.mesh_nm[a] > 0.0 && g.mesh_nm[a].is_finite()) {
                return Err(invalid("geometry.mesh_nm", "mesh sizes must be positive"));
            }
            let ratio = g.size_nm[a] / g.mesh_nm[a];
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                return Err(invalid(
                    "geometry.mesh_nm",
                    format!("mesh {} nm does not divide extent {} nm", g.mesh_nm[a], g.size_nm[a]),
                ));
            }
        }
        if let Some(l) = g.length_scale_nm {
            if !(l > 0.0 && l.is_finite()) {
                return Err(invalid("geometry.length_scale_nm", "must be positive"));
            }
        }
        self.physical(self.dynamics.alpha)
            .validate()
            .map_err(|e| invalid("material", e.to_string()))?;
        let d = &self.dynamics;
        if !(d.dt_ps > 0.0 && d.dt_ps.is_finite()) {
            return Err(invalid("dynamics.dt_ps", "must be positive"));
        }
        self.krylov_config()
            .validate()
            .map_err(|e| invalid("krylov", e.to_string()))?;
        finite3("drive.uniform_field_t", self.drive.uniform_field_t)?;
        for f in &self.drive.local_fields {
            finite3("drive.local_field.field_t", f.field_t)?;
            finite3("drive.local_field.center_nm", f.center_nm)?;
            finite3("drive.local_field.velocity_m_per_s", f.velocity_m_per_s)?;
            if f.half_width_nm.iter().any(|w| !(*w >= 0.0)) {
                return Err(invalid("drive.local_field.half_width_nm", "must be non-negative"));
            }
            window_ok("drive.local_field", f.start_ps, f.end_ps)?;
        }
        for c in &self.drive.currents {
            if !c.u_m_per_s.is_finite() {
                return Err(invalid("drive.current.u_m_per_s", "must be finite"));
            }
            finite3("drive.current.direction", c.direction)?;
            if c.direction.iter().all(|x| *x == 0.0) {
                return Err(invalid("drive.current.direction", "must be nonzero"));
            }
            if !(c.xi >= 0.0 && c.xi.is_finite()) {
                return Err(invalid("drive.current.xi", "must be non-negative"));
            }
            window_ok("drive.current", c.start_ps, c.end_ps)?;
        }
        validate_init("init", &self.init)?;
        if let Some(c) = &self.random_circle {
            if !(c.radius_nm >= 0.0 && c.radius_nm.is_finite()) {
                return Err(invalid("random_circle.radius_nm", "must be non-negative"));
            }
        }
        if let Some(s) = &self.string {
            if s.images < 1 {
                return Err(invalid("string.images", "need at least one interval"));
            }
            if !(s.tolerance > 0.0) {
                return Err(invalid("string.tolerance", "must be positive"));
            }
            if let Some(dt) = s.dt_ps {
                if !(dt > 0.0 && dt.is_finite()) {
                    return Err(invalid("string.dt_ps", "must be positive"));
                }
            }
            if s.inner_steps < 1 {
                return Err(invalid("string.inner_steps", "must be at least 1"));
            }
            validate_init("string.start", &s.start)?;
            validate_init("string.end", &s.end)?;
        }
        Ok(())
    }

    pub fn length_scale(&self) -> f64 {
        self.geometry.length_scale_nm.unwrap_or(self.geometry.size_nm[0]) * 1e-9
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let g = &self.geometry;
        Grid::from_physical(
            g.size_nm.map(|x| x * 1e-9),
            g.mesh_nm.map(|x| x * 1e-9),
            self.length_scale(),
        )
        .map_err(|e| invalid("geometry", e.to_string()))
    }

    pub fn physical(&self, alpha: f64) -> PhysicalParams {
        let m = &self.material;
        PhysicalParams {
            exchange: m.exchange_j_per_m,
            dmi: m.dmi_j_per_m2,
            ms: m.ms_a_per_m,
            anisotropy: m.anisotropy_j_per_m3,
            length_scale: self.length_scale(),
            alpha,
            gamma: m.gamma_per_s_t,
            mu0: skyrmag::params::MU0,
        }
    }

    /// Physical parameters with the dynamics damping; heat flow ignores `alpha`
    /// for the operator but the time unit still carries `1 + alpha^2`.
    pub fn params(&self) -> Result<(PhysicalParams, DimensionlessParams), CliError> {
        let p = self.physical(self.dynamics.alpha);
        let d = nondimensionalize(&p).map_err(|e| invalid("material", e.to_string()))?;
        Ok((p, d))
    }

    pub fn krylov_config(&self) -> KrylovConfig {
        KrylovConfig {
            tolerance: self.krylov.tolerance,
            max_iterations: self.krylov.max_iterations,
            restart: self.krylov.restart,
        }
    }

    pub fn drive_spec(&self, p: &PhysicalParams) -> DriveSpec {
        let uniform = self.drive.uniform_field_t.map(|b| p.field_from_tesla(b));
        DriveSpec {
            uniform_field: uniform,
            local_fields: self
                .drive
                .local_fields
                .iter()
                .map(|f| {
                    LocalField::from_physical(
                        p,
                        f.field_t,
                        f.center_nm.map(|x| x * 1e-9),
                        f.half_width_nm.map(|x| x * 1e-9),
                        f.velocity_m_per_s,
                        f.start_ps,
                        f.end_ps.unwrap_or(f64::INFINITY),
                    )
                })
                .collect(),
            currents: self
                .drive
                .currents
                .iter()
                .map(|c| {
                    CurrentDrive::from_physical(
                        p,
                        c.u_m_per_s,
                        c.direction,
                        c.xi,
                        c.start_ps,
                        c.end_ps.unwrap_or(f64::INFINITY),
                    )
                })
                .collect(),
        }
    }

    pub fn dynamics_kind(&self, default: DynamicsKind) -> DynamicsKind {
        self.dynamics.kind.unwrap_or(default)
    }

    /// Hash of everything that determines a trajectory from a given state:
    /// geometry, material, dynamics settings, solver settings, drives and seed.
    pub fn physics_hash(&self) -> [u8; 32] {
        #[derive(Serialize)]
        struct Physics<'a> {
            seed: u64,
            geometry: &'a Geometry,
            material: &'a Material,
            kind: Option<DynamicsKind>,
            alpha: f64,
            dt_ps: f64,
            krylov: &'a KrylovSection,
            drive: &'a DriveConfig,
        }
        let text = toml::to_string(&Physics {
            seed: self.seed,
            geometry: &self.geometry,
            material: &self.material,
            kind: self.dynamics.kind,
            alpha: self.dynamics.alpha,
            dt_ps: self.dynamics.dt_ps,
            krylov: &self.krylov,
            drive: &self.drive,
        })
        .expect("config sections serialize");
        Sha256::digest(text.as_bytes()).into()
    }
}

fn window_ok(field: &str, start: f64, end: Option<f64>) -> Result<(), CliError> {
    if !(start >= 0.0 && start.is_finite()) {
        return Err(invalid(&format!("{field}.start_ps"), "must be a non-negative time"));
    }
    if let Some(e) = end {
        if !(e > start) {
            return Err(invalid(&format!("{field}.end_ps"), "must exceed start_ps"));
        }
    }
    Ok(())
}

fn validate_init(field: &str, spec: &InitKind) -> Result<(), CliError> {
    match spec {
        InitKind::Uniform { direction } | InitKind::Blocks { background: direction, .. } | InitKind::Ring { background: direction, .. } => {
            finite3(&format!("{field}.direction"), *direction)?;
            if direction.iter().all(|x| *x == 0.0) {
                return Err(invalid(&format!("{field}.direction"), "must be nonzero"));
            }
        }
        InitKind::Snapshot { .. } => {}
    }
    match spec {
        InitKind::Blocks { block_nm, spacing_nm, .. } => {
            if block_nm.iter().any(|b| !(*b > 0.0)) || !(*spacing_nm >= 0.0) {
                return Err(invalid(&format!("{field}.block_nm"), "blocks and spacing must be positive"));
            }
        }
        InitKind::Ring { inner_radius_nm, outer_radius_nm, .. } => {
            if !(*inner_radius_nm >= 0.0 && outer_radius_nm > inner_radius_nm) {
                return Err(invalid(
                    &format!("{field}.outer_radius_nm"),
                    "need 0 <= inner_radius_nm < outer_radius_nm",
                ));
            }
        }
        _ => {}
    }
    Ok(())
}
