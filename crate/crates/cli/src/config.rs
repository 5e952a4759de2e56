//! Flat JSON experiment configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use threewave_core::phases::{MeshConfig, PhaseConfig};
use threewave_core::{IntegratorConfig, KahlerStructure, Method, MomentumValue, PhasePoint, C64};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodName {
    Dopri5,
    Rk4,
}

/// Every field is optional in the file; missing fields take the defaults
/// below. Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub signs: [f64; 3],
    pub gamma: [f64; 3],
    pub q1_re: f64,
    pub q1_im: f64,
    pub q2_re: f64,
    pub q2_im: f64,
    pub q3_re: f64,
    pub q3_im: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    pub method: MethodName,
    /// Simulation horizon, and the search horizon for the period.
    pub t_max: f64,
    pub period_tol: f64,
    pub mesh: u32,
    pub seed: u64,
    /// Rows for `simulate`, random points for `verify`.
    pub samples: usize,
    /// Leaf label for `surface`; taken from the initial point when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<[f64; 2]>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            signs: [1.0; 3],
            gamma: [1.0; 3],
            q1_re: 1.0,
            q1_im: 0.0,
            q2_re: 0.5,
            q2_im: 0.0,
            q3_re: 0.6,
            q3_im: 0.2,
            rel_tol: 1e-11,
            abs_tol: 1e-11,
            max_step: 0.1,
            max_steps: 1_000_000,
            method: MethodName::Dopri5,
            t_max: 50.0,
            period_tol: 1e-7,
            mesh: 1,
            seed: 0,
            samples: 1000,
            mu: None,
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("field `{field}`: {msg}"))
}

fn positive(field: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive and finite, got {v}")))
    }
}

pub const MAX_MESH_LEVEL: u32 = 6;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                CliError::Config(inner.to_string())
            } else {
                invalid(&path, inner)
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (i, s) in self.signs.iter().enumerate() {
            if *s != 1.0 && *s != -1.0 {
                return Err(invalid("signs", format!("entry {i} must be +1 or -1, got {s}")));
            }
        }
        for (i, g) in self.gamma.iter().enumerate() {
            positive("gamma", *g).map_err(|_| invalid("gamma", format!("entry {i} must be positive, got {g}")))?;
        }
        for (name, v) in [
            ("q1_re", self.q1_re),
            ("q1_im", self.q1_im),
            ("q2_re", self.q2_re),
            ("q2_im", self.q2_im),
            ("q3_re", self.q3_re),
            ("q3_im", self.q3_im),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("max_step", self.max_step)?;
        positive("t_max", self.t_max)?;
        positive("period_tol", self.period_tol)?;
        if self.max_steps == 0 {
            return Err(invalid("max_steps", "must be nonzero"));
        }
        if self.mesh > MAX_MESH_LEVEL {
            return Err(invalid("mesh", format!("must be at most {MAX_MESH_LEVEL}")));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be nonzero"));
        }
        if let Some(mu) = self.mu {
            if !mu.iter().all(|v| v.is_finite()) {
                return Err(invalid("mu", "must be finite"));
            }
        }
        Ok(())
    }

    pub fn kahler(&self) -> KahlerStructure {
        KahlerStructure::from_numeric(self.signs, self.gamma).expect("validated")
    }

    pub fn q0(&self) -> PhasePoint {
        PhasePoint::new(
            C64::new(self.q1_re, self.q1_im),
            C64::new(self.q2_re, self.q2_im),
            C64::new(self.q3_re, self.q3_im),
        )
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            method: match self.method {
                MethodName::Dopri5 => Method::Dopri5,
                MethodName::Rk4 => Method::Rk4,
            },
            max_steps: self.max_steps,
        }
    }

    pub fn phase_config(&self) -> PhaseConfig {
        PhaseConfig {
            integrator: self.integrator(),
            t_max: self.t_max,
            period_tol: self.period_tol,
            ..PhaseConfig::default()
        }
    }

    pub fn mesh_config(&self) -> MeshConfig {
        MeshConfig { level: self.mesh }
    }

    pub fn mu_override(&self) -> Option<MomentumValue> {
        self.mu.map(MomentumValue)
    }
}
