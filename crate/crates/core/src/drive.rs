//! Applied fields and spin-polarized currents, in dimensionless units.
//!
//! Times are dimensionless, lengths are in units of `L`, fields in units of `Ms`.
//! Use the `from_physical` constructors to convert from SI inputs.

use crate::field::Vec3;
use crate::params::PhysicalParams;

/// Half-open activity window `[start, end)` in dimensionless time. Edges are
/// compared with a relative slack so that windows given in picoseconds line up
/// with step boundaries computed as integer multiples of the step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub start: f64,
    pub end: f64,
}

impl Window {
    pub const ALWAYS: Window = Window {
        start: f64::NEG_INFINITY,
        end: f64::INFINITY,
    };

    pub fn new(start: f64, end: f64) -> Self {
        Self { start, end }
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-9 * t.abs().max(1e-12);
        t >= self.start - slack && t < self.end - slack
    }

    pub fn is_always(&self) -> bool {
        self.start == f64::NEG_INFINITY && self.end == f64::INFINITY
    }
}

/// Zeeman field applied over an axis-aligned box that may translate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalField {
    /// Field in units of Ms.
    pub field: Vec3,
    /// Box center at `window.start`.
    pub center: Vec3,
    pub half_width: Vec3,
    /// Box velocity in lengths `L` per unit dimensionless time.
    pub velocity: Vec3,
    pub window: Window,
}

impl LocalField {
    #[allow(clippy::too_many_arguments)]
    pub fn from_physical(
        p: &PhysicalParams,
        field_tesla: Vec3,
        center_m: Vec3,
        half_width_m: Vec3,
        velocity_m_per_s: Vec3,
        start_ps: f64,
        end_ps: f64,
    ) -> Self {
        let l = p.length_scale;
        Self {
            field: field_tesla.map(|b| p.field_from_tesla(b)),
            center: center_m.map(|x| x / l),
            half_width: half_width_m.map(|x| x / l),
            velocity: velocity_m_per_s.map(|v| p.velocity_to_dimensionless(v)),
            window: Window::new(
                p.time_to_dimensionless(start_ps),
                if end_ps.is_finite() {
                    p.time_to_dimensionless(end_ps)
                } else {
                    f64::INFINITY
                },
            ),
        }
    }

    pub fn center_at(&self, t: f64) -> Vec3 {
        let dt = if self.window.start.is_finite() {
            t - self.window.start
        } else {
            t
        };
        [
            self.center[0] + self.velocity[0] * dt,
            self.center[1] + self.velocity[1] * dt,
            self.center[2] + self.velocity[2] * dt,
        ]
    }

    /// Closed-box membership of point `x` at time `t` (ignores the window).
    pub fn covers(&self, x: Vec3, t: f64) -> bool {
        let c = self.center_at(t);
        (0..3).all(|a| (x[a] - c[a]).abs() <= self.half_width[a])
    }
}

/// Spin-transfer torque from an in-plane current.
///
/// Contributes `beta [m x (j . grad) m + xi (j . grad) m]` to the local field,
/// with `beta = -u (1 + alpha^2) / (mu0 gamma Ms L)` for drift velocity `u = -bJ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentDrive {
    pub beta: f64,
    /// Unit current direction.
    pub direction: Vec3,
    /// Non-adiabaticity.
    pub xi: f64,
    pub window: Window,
}

impl CurrentDrive {
    pub fn from_physical(
        p: &PhysicalParams,
        u_m_per_s: f64,
        direction: Vec3,
        xi: f64,
        start_ps: f64,
        end_ps: f64,
    ) -> Self {
        let n = crate::field::norm(direction);
        let direction = if n > 0.0 {
            direction.map(|d| d / n)
        } else {
            [0.0; 3]
        };
        Self {
            beta: -p.velocity_to_dimensionless(u_m_per_s),
            direction,
            xi,
            window: Window::new(
                p.time_to_dimensionless(start_ps),
                if end_ps.is_finite() {
                    p.time_to_dimensionless(end_ps)
                } else {
                    f64::INFINITY
                },
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DriveSpec {
    /// Uniform applied field `h_e` in units of Ms.
    pub uniform_field: Vec3,
    pub local_fields: Vec<LocalField>,
    pub currents: Vec<CurrentDrive>,
}

impl DriveSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(h_e: Vec3) -> Self {
        Self {
            uniform_field: h_e,
            ..Self::default()
        }
    }

    /// True when the drive does not change with time.
    pub fn is_static(&self) -> bool {
        self.local_fields
            .iter()
            .all(|f| f.window.is_always() && f.velocity == [0.0; 3])
            && self.currents.iter().all(|c| c.window.is_always())
    }

    pub fn active_local_fields(&self, t: f64) -> impl Iterator<Item = &LocalField> {
        self.local_fields.iter().filter(move |f| f.window.contains(t))
    }

    pub fn active_currents(&self, t: f64) -> impl Iterator<Item = &CurrentDrive> {
        self.currents.iter().filter(move |c| c.window.contains(t))
    }
}
