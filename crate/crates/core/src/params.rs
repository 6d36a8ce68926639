//! Material constants and their dimensionless groups.

use crate::error::{Error, Result};

pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Magnitude of the electron gyromagnetic ratio in 1/(s T).
pub const GAMMA_E: f64 = 1.760_859_63e11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Exchange constant A (J/m).
    pub exchange: f64,
    /// DMI constant D (J/m^2).
    pub dmi: f64,
    /// Saturation magnetization Ms (A/m).
    pub ms: f64,
    /// Uniaxial anisotropy constant Ku (J/m^3), easy axis e1.
    pub anisotropy: f64,
    /// Length scale L (m).
    pub length_scale: f64,
    /// Gilbert damping.
    pub alpha: f64,
    /// Gyromagnetic parameter (1/(s T)).
    pub gamma: f64,
    /// Vacuum permeability (T m / A).
    pub mu0: f64,
}

impl PhysicalParams {
    /// FeGe with the given length scale and damping.
    pub fn fege(length_scale: f64, alpha: f64) -> Self {
        Self {
            exchange: 8.78e-12,
            dmi: 1.58e-3,
            ms: 3.84e5,
            anisotropy: 0.0,
            length_scale,
            alpha,
            gamma: GAMMA_E,
            mu0: MU0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")))
            }
        };
        positive("exchange constant A", self.exchange)?;
        positive("saturation magnetization Ms", self.ms)?;
        positive("length scale L", self.length_scale)?;
        positive("mu0", self.mu0)?;
        positive("gamma", self.gamma)?;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "damping alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        if !self.dmi.is_finite() {
            return Err(Error::InvalidArgument("DMI constant must be finite".into()));
        }
        if !(self.anisotropy >= 0.0 && self.anisotropy.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "anisotropy must be nonnegative, got {}",
                self.anisotropy
            )));
        }
        Ok(())
    }

    /// `mu0 Ms^2` in J/m^3.
    pub fn energy_density_scale(&self) -> f64 {
        self.mu0 * self.ms * self.ms
    }

    /// Joules per unit of dimensionless energy: `mu0 Ms^2 L^3`.
    pub fn energy_scale(&self) -> f64 {
        self.energy_density_scale() * self.length_scale.powi(3)
    }

    /// Seconds per unit of dimensionless time: `(1 + alpha^2) / (mu0 gamma Ms)`.
    pub fn time_scale(&self) -> f64 {
        (1.0 + self.alpha * self.alpha) / (self.mu0 * self.gamma * self.ms)
    }

    /// Dimensionless field for an induction in tesla: `B / (mu0 Ms)`.
    pub fn field_from_tesla(&self, b: f64) -> f64 {
        b / (self.mu0 * self.ms)
    }

    /// Physical time in picoseconds to dimensionless time.
    pub fn time_to_dimensionless(&self, t_ps: f64) -> f64 {
        t_ps * 1e-12 / self.time_scale()
    }

    pub fn time_to_ps(&self, tau: f64) -> f64 {
        tau * self.time_scale() * 1e12
    }

    /// Velocity in m/s to dimensionless lengths per dimensionless time.
    pub fn velocity_to_dimensionless(&self, v: f64) -> f64 {
        v * self.time_scale() / self.length_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// `2A / (mu0 Ms^2 L^2)`
    pub eps: f64,
    /// `2D / (mu0 Ms^2 L)`
    pub kappa: f64,
    /// `D L / (2A)`, stiffness of the chiral boundary condition.
    pub kappa_b: f64,
    /// `2Ku / (mu0 Ms^2)`
    pub q: f64,
    pub alpha: f64,
}

impl DimensionlessParams {
    /// Parameters without DMI or anisotropy.
    pub fn exchange_only(eps: f64, alpha: f64) -> Self {
        Self {
            eps,
            kappa: 0.0,
            kappa_b: 0.0,
            q: 0.0,
            alpha,
        }
    }
}

pub fn nondimensionalize(p: &PhysicalParams) -> Result<DimensionlessParams> {
    p.validate()?;
    let e = p.energy_density_scale();
    Ok(DimensionlessParams {
        eps: 2.0 * p.exchange / (e * p.length_scale * p.length_scale),
        kappa: 2.0 * p.dmi / (e * p.length_scale),
        kappa_b: p.dmi * p.length_scale / (2.0 * p.exchange),
        q: 2.0 * p.anisotropy / e,
        alpha: p.alpha,
    })
}
