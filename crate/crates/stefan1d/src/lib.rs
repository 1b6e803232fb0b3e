//! Front tracking for one-dimensional multi-phase Stefan problems arising
//! from a forward-backward cell adhesion-diffusion equation.
//!
//! Densities take values in the stable low band or the stable high band of a
//! non-monotone flux; the bands are bridged by jumps (fronts) whose motion is
//! governed by a Rankine-Hugoniot condition. This crate provides
//!
//! - the constitutive model and plateau selection ([`model`]),
//! - a moving-mesh front-tracking solver on rescaled phase grids
//!   ([`fronttrack`]),
//! - event detection and topology surgery: coalescence, boundary absorption,
//!   steady state, blow-up ([`events`]),
//! - two independent cross-validation solvers: an enthalpy scheme on a fixed
//!   grid and a Lagrangian-coordinate one-phase scheme ([`enthalpy`]),
//! - steady-state classification, decay-rate fits and gradient monitors
//!   ([`analysis`]),
//! - scenario configuration, presets and run drivers ([`scenario`],
//!   [`driver`]) with CSV/JSON outputs ([`output`]).
//!
//! Each major capability has a runnable example under `examples/`; the
//! `stefan1d` binary exposes the same drivers as `run`, `sweep`, `presets`
//! and `validate` subcommands.

pub mod analysis;
pub mod driver;
pub mod enthalpy;
pub mod events;
pub mod fronttrack;
pub mod model;
pub mod numerics;
pub mod output;
pub mod scenario;

pub use fronttrack::{PhaseGrid, SimState, StepControl};
pub use model::{
    diffusivity, plateau_values, temperature, unstable_interval, AdhesionModel, ModelError,
    PhaseKind, PlateauValues,
};
