//! The `simulate`, `phases` and `surface` subcommands.

use std::path::Path;

use threewave_core::phases::reconstruction::reduced_period;
use threewave_core::phases::{cap_mesh, compute_phases, integrate_curvature, surface_top, CapMesh};
use threewave_core::reduction::{casimirs, phi};
use threewave_core::symmetry::{normalize_angle, wrap_to_pi};
use threewave_core::{
    hamiltonian, integrate, momentum, project, KahlerStructure, MomentumValue, PhasePoint, ReducedPoint, TimeSpan,
};

use crate::config::ExperimentConfig;
use crate::output::{emit, Csv};
use crate::report::{
    CasimirReport, Check, ConservationReport, PhaseReport, RunReport, SurfaceReport, SCHEMA, SCHEMA_VERSION,
};
use crate::CliError;

// Thresholds stamped into the report's check list.
pub const PHASE_TOL: f64 = 1e-6;
pub const CONSERVATION_TOL: f64 = 1e-8;
pub const LIFT_MOMENTUM_TOL: f64 = 1e-8;
pub const SURFACE_REL_TOL: f64 = 1e-2;

fn reduced_with(k: &KahlerStructure, q: &PhasePoint, mu: MomentumValue) -> ReducedPoint {
    let c = project(k, q).coords();
    ReducedPoint::new(c[0], c[1], c[2], c[3], mu)
}

pub const SIMULATE_HEADER: [&str; 17] = [
    "t", "q1_re", "q1_im", "q2_re", "q2_im", "q3_re", "q3_im", "H", "K1", "K2", "X", "Y", "Z1", "Z2", "C1", "C2", "phi",
];

/// Full flow over `[0, t_max]` at `samples + 1` uniform times. `C1`, `C2` and
/// `phi` are evaluated with the leaf label of the initial point.
pub fn simulate_csv(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let k = cfg.kahler();
    let q0 = cfg.q0();
    let mu0 = momentum(&k, &q0);
    let traj = integrate(&k, &q0, TimeSpan::until(cfg.t_max), &cfg.integrator())?;
    let mut csv = Csv::new(&SIMULATE_HEADER);
    for (t, q) in traj.sample_uniform(cfg.samples) {
        let j = momentum(&k, &q);
        let y = reduced_with(&k, &q, mu0);
        let c = casimirs(&k, &y);
        let r = q.to_real();
        csv.row(
            &[],
            &[
                t,
                r[0],
                r[1],
                r[2],
                r[3],
                r[4],
                r[5],
                hamiltonian(&q),
                j.k1(),
                j.k2(),
                y.x,
                y.y,
                y.z1,
                y.z2,
                c.c1,
                c.c2,
                phi(&k, &y.leaf()),
            ],
        );
    }
    Ok(csv.into_string())
}

pub fn simulate(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<(), CliError> {
    emit(out, &simulate_csv(cfg)?)
}

fn angles(theta: [f64; 2]) -> [f64; 2] {
    theta.map(normalize_angle)
}

/// Runs the phase computation and every cross-check on the orbit through `q0`.
pub fn analyse(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let k = cfg.kahler();
    let q0 = cfg.q0();
    let pc = cfg.phase_config();
    let p = compute_phases(&k, &q0, &pc)?;
    let (period, rt) = reduced_period(&k, &q0, &pc)?;

    let full = integrate(&k, &q0, TimeSpan::until(period), &pc.integrator)?;
    let drift = full.drift();
    let mu0 = momentum(&k, &q0);
    let (mut c1, mut c2, mut max_phi) = (0.0f64, 0.0f64, 0.0f64);
    for (_, q) in full.samples() {
        let y = reduced_with(&k, &q, mu0);
        let c = casimirs(&k, &y);
        c1 = c1.max(c.c1.abs());
        c2 = c2.max(c.c2.abs());
        max_phi = max_phi.max(phi(&k, &y.leaf()).abs());
    }

    let mesh = cap_mesh(&k, &rt.mu(), rt.initial().x, &cfg.mesh_config())?;
    let integral = integrate_curvature(&k, &mesh)?;
    let geo = p.theta_geom.theta().map(wrap_to_pi);
    let scale = geo[0].abs().max(geo[1].abs());
    let gap = (wrap_to_pi(integral[0]) - geo[0]).abs().max((wrap_to_pi(integral[1]) - geo[1]).abs());
    let relative_gap = if scale > 0.0 { gap / scale } else { gap };

    let phases = PhaseReport {
        theta_dyn: angles(p.theta_dyn.theta()),
        theta_geom: angles(p.theta_geom.theta()),
        theta_total: angles(p.theta_total.theta()),
        xi_dyn_reconstruction: p.xi_dyn_integral,
        xi_dyn_reduced: p.xi_dyn_reduced_integral,
        dynamic_route_gap: p.dynamic_route_gap(),
        decomposition_residual: p.decomposition_residual,
        closure_error: p.closure_error,
        fiber_residual: p.residual_q2,
        lift_momentum_drift: p.lift_momentum_drift,
    };
    let checks = vec![
        Check::new("decomposition", phases.decomposition_residual, PHASE_TOL),
        Check::new("dynamic_routes", phases.dynamic_route_gap, PHASE_TOL),
        Check::new("closure", phases.closure_error, PHASE_TOL),
        Check::new("fiber", phases.fiber_residual, PHASE_TOL),
        Check::new("lift_momentum", phases.lift_momentum_drift, LIFT_MOMENTUM_TOL),
        Check::new("surface_vs_holonomy", relative_gap, SURFACE_REL_TOL),
        Check::new("conservation", drift.max(), CONSERVATION_TOL),
        Check::new("casimirs", c1.max(c2), CONSERVATION_TOL),
    ];
    Ok(RunReport {
        schema: SCHEMA.into(),
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        period,
        phases,
        surface: SurfaceReport {
            mesh_level: cfg.mesh,
            triangles: mesh.triangles.len(),
            theta_geom: angles(integral),
            integral,
            relative_gap,
        },
        conservation: ConservationReport { hamiltonian: drift.hamiltonian, k1: drift.k1, k2: drift.k2 },
        casimirs: CasimirReport { c1, c2, max_phi },
        checks,
    })
}

pub fn phases(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<(), CliError> {
    let report = analyse(cfg)?;
    let mut text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

pub const SURFACE_HEADER: [&str; 6] = ["kind", "id", "vertex", "X", "Y", "Z2"];

/// Cap triangulation plus a closed polyline. Without a `mu` override the cap
/// is bounded by the reduced orbit through `q0`, which is written over one
/// period. With an override the cap reaches halfway down from the top of the
/// surface and the polyline is its boundary ring.
pub fn surface_csv(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let k = cfg.kahler();
    let (mesh, orbit): (CapMesh, Vec<[f64; 3]>) = match cfg.mu_override() {
        Some(mu) => {
            let x0 = 0.5 * surface_top(&k, &mu)?;
            let mesh = cap_mesh(&k, &mu, x0, &cfg.mesh_config())?;
            let ns = cfg.mesh_config().sectors();
            let n = mesh.vertices.len();
            let mut ring = mesh.vertices[n.saturating_sub(ns)..].to_vec();
            ring.push(ring[0]);
            (mesh, ring)
        }
        None => {
            let q0 = cfg.q0();
            let (period, rt) = reduced_period(&k, &q0, &cfg.phase_config())?;
            let mesh = cap_mesh(&k, &rt.mu(), rt.initial().x, &cfg.mesh_config())?;
            let n = cfg.samples;
            let orbit = (0..=n)
                .map(|i| {
                    let t = if i == n { period } else { period * i as f64 / n as f64 };
                    rt.at(t).coords()
                })
                .collect();
            (mesh, orbit)
        }
    };
    let mut csv = Csv::new(&SURFACE_HEADER);
    for (i, t) in mesh.triangles.iter().enumerate() {
        for (j, &v) in t.iter().enumerate() {
            csv.row(&["triangle", &i.to_string(), &j.to_string()], &mesh.vertices[v]);
        }
    }
    for (j, p) in orbit.iter().enumerate() {
        csv.row(&["orbit", "0", &j.to_string()], p);
    }
    Ok(csv.into_string())
}

pub fn surface(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<(), CliError> {
    emit(out, &surface_csv(cfg)?)
}
