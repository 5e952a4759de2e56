//! JSON run report written by `threewave phases`.
//!
//! Angles are radians in `[0, 2π)`. Residuals and drifts are absolute
//! unless the field name says `relative`.

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const SCHEMA: &str = "threewave.run-report";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub period: f64,
    pub phases: PhaseReport,
    pub surface: SurfaceReport,
    pub conservation: ConservationReport,
    pub casimirs: CasimirReport,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub theta_dyn: [f64; 2],
    pub theta_geom: [f64; 2],
    pub theta_total: [f64; 2],
    /// Time integral of the connection along the horizontal lift.
    pub xi_dyn_reconstruction: [f64; 2],
    /// Same integral evaluated from the reduced orbit alone.
    pub xi_dyn_reduced: [f64; 2],
    pub dynamic_route_gap: f64,
    pub decomposition_residual: f64,
    pub closure_error: f64,
    pub fiber_residual: f64,
    pub lift_momentum_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceReport {
    pub mesh_level: u32,
    pub triangles: usize,
    /// Curvature integral over the cap, reduced to `[0, 2π)`.
    pub theta_geom: [f64; 2],
    /// Curvature integral before reduction modulo 2π.
    pub integral: [f64; 2],
    /// Largest componentwise gap to the holonomy value (both taken in
    /// `(−π, π]`), divided by the largest holonomy component.
    pub relative_gap: f64,
}

/// Largest deviation from the initial value over one period of the full flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationReport {
    pub hamiltonian: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Largest `|C₁|, |C₂|` along one period, with the leaf label fixed at `J(q0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CasimirReport {
    pub c1: f64,
    pub c2: f64,
    pub max_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, threshold, pass: residual < threshold }
    }
}
