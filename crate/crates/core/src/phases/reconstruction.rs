//! Horizontal lifts of reduced orbits and the reconstruction phases.
//!
//! Conventions: `d_T = g_geom·x₀` for the horizontal lift `d` through `x₀`,
//! and `x_T = g_dyn·d_T` with `g_dyn = exp ∫₀ᵀ 𝒜(X_H(d_t)) dt`.

use crate::dynamics::{
    detect_period, integrate, integrate_reduced, ode, vector_field, DenseSolution, IntegratorConfig, TimeSpan,
};
use crate::error::{Error, Result};
use crate::geometry::{KahlerStructure, PhasePoint};
use crate::reduction::{project, reconstruct_point, LeafPoint, ReducedPoint};
use crate::symmetry::{connection, generator, momentum, wrap_to_pi, CoAlgebraElement, GroupElement};

use super::transverse::{dyn_phase_density, HorizontalLifter};

/// Horizontal lift `d_t` of a reduced solution.
#[derive(Debug, Clone)]
pub struct LiftedPath {
    kahler: KahlerStructure,
    solution: DenseSolution<6>,
}

impl LiftedPath {
    pub fn kahler(&self) -> &KahlerStructure {
        &self.kahler
    }

    pub fn dense(&self) -> &DenseSolution<6> {
        &self.solution
    }

    pub fn span(&self) -> TimeSpan {
        TimeSpan::new(self.solution.t_start(), self.solution.t_end())
    }

    pub fn at(&self, t: f64) -> PhasePoint {
        PhasePoint::from_real(&self.solution.eval(t))
    }

    pub fn initial(&self) -> PhasePoint {
        PhasePoint::from_real(&self.solution.initial_state())
    }

    pub fn final_point(&self) -> PhasePoint {
        PhasePoint::from_real(&self.solution.final_state())
    }

    pub fn samples(&self) -> Vec<(f64, PhasePoint)> {
        self.solution.grid().into_iter().map(|(t, x)| (t, PhasePoint::from_real(&x))).collect()
    }

    /// Largest `|J(d_t) − J(d_0)|` on the step grid.
    pub fn momentum_drift(&self) -> f64 {
        let j0 = momentum(&self.kahler, &self.initial());
        self.samples()
            .iter()
            .map(|(_, d)| {
                let j = momentum(&self.kahler, d);
                (j.k1() - j0.k1()).abs().max((j.k2() - j0.k2()).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Integrates `ḋ = X_H(d) − (𝒜(X_H(d)))_P(d)` from `x0`.
pub fn horizontal_lift(
    k: &KahlerStructure,
    x0: &PhasePoint,
    span: TimeSpan,
    cfg: &IntegratorConfig,
) -> Result<LiftedPath> {
    if span.is_empty() {
        return Err(Error::InvalidConfig(format!("time span [{}, {}] is empty", span.t0, span.t1)));
    }
    connection(k, x0, &vector_field(k, x0))?;
    let mut failure = None;
    let rhs = |_t: f64, s: &[f64; 6]| {
        let d = PhasePoint::from_real(s);
        let xh = vector_field(k, &d);
        match connection(k, &d, &xh) {
            Ok(xi) => (xh - generator(&xi, &d)).to_real(),
            Err(e) => {
                failure.get_or_insert(e);
                [0.0; 6]
            }
        }
    };
    let solution = ode::solve(rhs, span.t0, x0.to_real(), span.t1, cfg)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(LiftedPath { kahler: *k, solution })
}

/// Default Simpson panels per accepted integrator step.
pub const SIMPSON_PANELS: usize = 8;

/// Composite Simpson rule over every accepted step of a dense solution,
/// with `panels` (rounded up to even) sub-intervals per step.
pub fn simpson_on_steps<const N: usize, F>(sol: &DenseSolution<N>, panels: usize, mut f: F) -> Result<[f64; 2]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; 2]>,
{
    let m = (panels.max(2) + 1) & !1;
    let mut acc = [0.0; 2];
    for seg in sol.segments() {
        let (a, b) = (seg.start(), seg.end());
        let h = (b - a) / m as f64;
        for i in 0..=m {
            let t = if i == m { b } else { a + h * i as f64 };
            let w = if i == 0 || i == m {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let v = f(t, &seg.eval(t))?;
            acc[0] += w * h / 3.0 * v[0];
            acc[1] += w * h / 3.0 * v[1];
        }
    }
    Ok(acc)
}

/// `∫ 𝒜(X_H(d_t)) dt` over the whole lift, by composite Simpson.
pub fn reconstruction_equation_phase(lift: &LiftedPath) -> Result<[f64; 2]> {
    reconstruction_equation_phase_with(lift, SIMPSON_PANELS)
}

pub fn reconstruction_equation_phase_with(lift: &LiftedPath, panels: usize) -> Result<[f64; 2]> {
    let k = *lift.kahler();
    simpson_on_steps(lift.dense(), panels, |_, s| {
        let d = PhasePoint::from_real(s);
        Ok(connection(&k, &d, &vector_field(&k, &d))?.0)
    })
}

/// `∫ (D h(e¹), D h(e²)) dt` along a reduced solution.
pub fn reduced_dynamic_phase(
    k: &KahlerStructure,
    sol: &DenseSolution<3>,
    mu: crate::symmetry::MomentumValue,
    panels: usize,
) -> Result<[f64; 2]> {
    simpson_on_steps(sol, panels, |_, c| {
        let y = LeafPoint::new(c[0], c[1], c[2], mu).to_reduced(k);
        Ok([
            dyn_phase_density(k, &y, &CoAlgebraElement::basis(0))?,
            dyn_phase_density(k, &y, &CoAlgebraElement::basis(1))?,
        ])
    })
}

fn vanishes(z: crate::C64, scale: f64) -> bool {
    z.norm() <= 1e-12 * scale
}

/// The group element `g` with `xb = g·xa`, and the consistency residual of
/// the `q₂` phase.
///
/// `θ¹ = −Δarg q₁`, `θ² = −Δarg q₃`; when one of `q₁`, `q₃` vanishes its angle
/// is recovered from `q₂` instead, and the residual is then zero.
pub fn extract_group_element(xa: &PhasePoint, xb: &PhasePoint) -> Result<(GroupElement, f64)> {
    let scale = xa.norm().max(xb.norm()).max(1.0);
    let dead = |j: usize| vanishes(xa.0[j], scale) || vanishes(xb.0[j], scale);
    let darg = |j: usize| -(xb.0[j].arg() - xa.0[j].arg());
    let t2 = if dead(1) { None } else { Some(darg(1)) };
    let (t1, t3) = match (dead(0), dead(2)) {
        (false, false) => (darg(0), darg(2)),
        (true, false) => (t2.ok_or(Error::AmbiguousPhase("q1 and q2 vanish"))? - darg(2), darg(2)),
        (false, true) => (darg(0), t2.ok_or(Error::AmbiguousPhase("q3 and q2 vanish"))? - darg(0)),
        (true, true) => return Err(Error::AmbiguousPhase("q1 and q3 vanish")),
    };
    let residual = match (dead(0) || dead(2), t2) {
        (false, Some(t2)) => wrap_to_pi(t2 - t1 - t3).abs(),
        _ => 0.0,
    };
    Ok((GroupElement::new([t1, t3]), residual))
}

/// Parameters of [`compute_phases`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConfig {
    pub integrator: IntegratorConfig,
    /// Horizon searched for the first return of the reduced orbit.
    pub t_max: f64,
    /// Closure tolerance passed to period detection.
    pub period_tol: f64,
    pub simpson_panels: usize,
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::with_tolerance(1e-11),
            t_max: 50.0,
            period_tol: 1e-7,
            simpson_panels: SIMPSON_PANELS,
        }
    }
}

/// Reconstruction phases of one period of a reduced orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseBreakdown {
    pub period: f64,
    /// `∫ 𝒜(X_H(d_t)) dt` along the horizontal lift.
    pub xi_dyn_integral: [f64; 2],
    /// The same integral from the transverse derivative of `h` on the quotient.
    pub xi_dyn_reduced_integral: [f64; 2],
    pub theta_dyn: GroupElement,
    pub theta_geom: GroupElement,
    pub theta_total: GroupElement,
    /// Worst `q₂` consistency residual of the two extractions.
    pub residual_q2: f64,
    /// Distance of `π(x_T)` and `π(d_T)` from `π(x₀)`.
    pub closure_error: f64,
    /// Circular distance between `θ_total` and `θ_dyn + θ_geom`.
    pub decomposition_residual: f64,
    /// Momentum drift along the horizontal lift.
    pub lift_momentum_drift: f64,
}

impl PhaseBreakdown {
    pub fn dynamic_route_gap(&self) -> f64 {
        (self.xi_dyn_integral[0] - self.xi_dyn_reduced_integral[0])
            .abs()
            .max((self.xi_dyn_integral[1] - self.xi_dyn_reduced_integral[1]).abs())
    }
}

fn dist4(a: [f64; 4], b: [f64; 4]) -> f64 {
    a.iter().zip(&b).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt()
}

/// Detects the period of the reduced orbit through `π(q0)`.
pub fn reduced_period(
    k: &KahlerStructure,
    q0: &PhasePoint,
    cfg: &PhaseConfig,
) -> Result<(f64, crate::dynamics::ReducedTrajectory)> {
    let y0 = project(k, q0).leaf();
    let rt = integrate_reduced(k, &y0, TimeSpan::until(cfg.t_max), &cfg.integrator)?;
    let period = detect_period(&rt, cfg.period_tol)?;
    Ok((period, rt))
}

/// Dynamic, geometric and total phases of the orbit through `q0`.
pub fn compute_phases(k: &KahlerStructure, q0: &PhasePoint, cfg: &PhaseConfig) -> Result<PhaseBreakdown> {
    if !q0.is_finite() {
        return Err(Error::NonFinite("initial phase point"));
    }
    let (period, rt) = reduced_period(k, q0, cfg)?;
    let span = TimeSpan::until(period);
    let full = integrate(k, q0, span, &cfg.integrator)?;
    let lift = horizontal_lift(k, q0, span, &cfg.integrator)?;
    let (x_t, d_t) = (full.final_point(), lift.final_point());

    let (theta_geom, r_geom) = extract_group_element(q0, &d_t)?;
    let (theta_total, r_total) = extract_group_element(q0, &x_t)?;
    let xi_dyn_integral = reconstruction_equation_phase_with(&lift, cfg.simpson_panels)?;
    let theta_dyn = GroupElement::new(xi_dyn_integral);

    // integrate the reduced density over exactly one period
    let y0 = rt.initial();
    let reduced = ode::solve(
        |_t, c: &[f64; 3]| crate::reduction::reduced_vector_field(k, &LeafPoint::new(c[0], c[1], c[2], y0.mu)),
        0.0,
        y0.coords(),
        period,
        &cfg.integrator,
    )?;
    let xi_dyn_reduced_integral = reduced_dynamic_phase(k, &reduced, y0.mu, cfg.simpson_panels)?;

    let p0 = project(k, q0).coords();
    let closure_error = dist4(project(k, &x_t).coords(), p0).max(dist4(project(k, &d_t).coords(), p0));
    Ok(PhaseBreakdown {
        period,
        xi_dyn_integral,
        xi_dyn_reduced_integral,
        theta_dyn,
        theta_geom,
        theta_total,
        residual_q2: r_geom.max(r_total),
        closure_error,
        decomposition_residual: theta_total.distance(&theta_dyn.compose(&theta_geom)),
        lift_momentum_drift: lift.momentum_drift(),
    })
}

/// Holonomy of the connection around a closed polygon in orbit-space
/// coordinates `(X, Y, Z₁, Z₂)`; the last vertex joins back to the first.
///
/// Each edge is followed by its horizontal lift using `steps` RK4 steps.
pub fn polygon_holonomy(k: &KahlerStructure, vertices: &[[f64; 4]], steps: usize) -> Result<GroupElement> {
    if vertices.len() < 3 {
        return Ok(GroupElement::identity());
    }
    let start = ReducedPoint::from_invariants(k, vertices[0])?;
    let d0 = reconstruct_point(k, &start)?;
    let steps = steps.max(1);
    let mut d = d0;
    for i in 0..vertices.len() {
        let (a, b) = (vertices[i], vertices[(i + 1) % vertices.len()]);
        let u: [f64; 4] = std::array::from_fn(|j| b[j] - a[j]);
        let h = 1.0 / steps as f64;
        let f =
            |x: &PhasePoint| -> Result<crate::geometry::TangentVector> { Ok(HorizontalLifter::new(k, x)?.lift(&u)) };
        for _ in 0..steps {
            let k1 = f(&d)?;
            let k2 = f(&d.displaced(&k1, 0.5 * h))?;
            let k3 = f(&d.displaced(&k2, 0.5 * h))?;
            let k4 = f(&d.displaced(&k3, h))?;
            let incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            d = d.displaced(&incr, 1.0);
        }
    }
    Ok(extract_group_element(&d0, &d)?.0)
}
