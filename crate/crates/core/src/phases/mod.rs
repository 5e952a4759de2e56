//! Reconstruction phases.
//!
//! * [`transverse`]: horizontal lifts of quotient tangents, the transverse
//!   distribution and the maps `N`, `L`, the dynamic-phase density, and the
//!   assembled two-form `ω′`.
//! * [`reconstruction`]: horizontal lifts of orbits, the reconstruction
//!   equation, phase extraction and [`compute_phases`].
//! * [`curvature`]: `D_μω′` by finite differences and the geometric phase
//!   as a surface integral.

pub mod curvature;
pub mod reconstruction;
pub mod transverse;

pub use curvature::{
    cap_mesh, curvature_components, exterior_covariant_derivative_omega, geometric_phase_surface, integrate_curvature,
    surface_top, CapMesh, MeshConfig,
};
pub use reconstruction::{
    compute_phases, extract_group_element, horizontal_lift, polygon_holonomy, reconstruction_equation_phase,
    LiftedPath, PhaseBreakdown, PhaseConfig,
};
pub use transverse::{
    assembled_form, assembled_metric, dyn_phase_density, dyn_phase_density_routes, lift_quotient_tangent, map_l, map_n,
    quotient_momentum_differential, HorizontalLifter, TransverseBasis,
};
