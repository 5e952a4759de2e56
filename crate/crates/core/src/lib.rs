//! Abstract mechanical connection and reconstruction phases on a weighted
//! Kähler phase space with a free torus action, worked out end to end for
//! the resonant three-wave interaction on ℂ³.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: the weighted symplectic form, metric and complex
//!   structure on ℂ³, plus the musical maps between vectors and one-forms.
//! * [`symmetry`]: the T² action, its generators, the momentum map, the
//!   locked inertia tensor and the mechanical connection one-form.
//! * [`dynamics`]: the three-wave Hamiltonian, adaptive integration of the
//!   full and reduced flows, and period detection.
//! * [`reduction`]: invariants, Casimirs, the three-wave surface, reduced
//!   brackets and symplectic form, and a local section of the quotient map.
//! * [`phases`]: the transverse distribution, horizontal lifts, and the
//!   dynamic / geometric / total reconstruction phases.

// `!(a > b)` is used on purpose so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod phases;
pub mod reduction;
pub mod symmetry;

pub use dynamics::{
    detect_period, hamiltonian, integrate, integrate_reduced, vector_field, IntegratorConfig, Method,
    ReducedTrajectory, TimeSpan, Trajectory,
};
pub use error::{Error, Result};
pub use geometry::{Covector, KahlerStructure, PhasePoint, Sign, TangentVector, C64};
pub use phases::{compute_phases, LiftedPath, PhaseBreakdown, PhaseConfig, TransverseBasis};
pub use reduction::{project, CasimirValues, LeafPoint, ReducedPoint};
pub use symmetry::{
    act, connection, generator, inertia, momentum, AlgebraElement, CoAlgebraElement, GroupElement, InertiaTensor,
    MomentumValue,
};
