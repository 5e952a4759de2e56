use thiserror::Error;

/// Errors raised by the geometric and numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Kähler structure: {0}")]
    InvalidStructure(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("locked inertia tensor is singular (det = {det:.3e}); the point is not regular")]
    SingularInertia { det: f64 },

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("maximum number of integrator steps ({0}) exceeded")]
    MaxStepsExceeded(usize),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("initial point is off the three-wave surface (|phi| = {residual:.3e})")]
    OffSurface { residual: f64 },

    #[error("reduced trajectory does not return to its Poincaré section")]
    NotPeriodic,

    #[error("gradient of phi vanishes; the leaf point is singular")]
    SingularLeafPoint,

    #[error("leaf data are infeasible: {0}")]
    InfeasibleLeafData(String),

    #[error("section gauge undefined: q1 or q3 vanishes")]
    GaugeUndefined,

    #[error("carried momentum is inconsistent with the invariants (C1 = {c1:.3e}, C2 = {c2:.3e})")]
    InconsistentLeafLabel { c1: f64, c2: f64 },

    #[error("group element is ambiguous: {0}")]
    AmbiguousPhase(&'static str),

    #[error("cap triangulation failed: {0}")]
    MeshFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
