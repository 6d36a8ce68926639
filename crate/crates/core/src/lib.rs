//! Finite-difference micromagnetics with Dzyaloshinskii-Moriya interaction.
//!
//! Magnetization lives at cell centers of a structured grid. Free surfaces carry the
//! chiral boundary condition through ghost layers, the Landau-Lifshitz equation and
//! the harmonic map heat flow are integrated by semi-implicit BDF projection, and
//! minimum energy paths are found with the string method.

pub mod drive;
pub mod effective;
pub mod error;
pub mod field;
pub mod ghost;
pub mod grid;
pub mod krylov;
pub mod mep;
pub mod operators;
pub mod params;
pub mod snapshot;
pub mod spline;
pub mod stepper;
pub mod vtk;

pub use drive::{CurrentDrive, DriveSpec, LocalField, Window};
pub use error::{Error, Result};
pub use field::{Magnetization, ScalarField, Vec3, VectorField};
pub use ghost::{fill_ghosts, GhostField};
pub use grid::Grid;
pub use krylov::KrylovConfig;
pub use params::{nondimensionalize, DimensionlessParams, PhysicalParams};
pub use stepper::{Dynamics, SolverState};
