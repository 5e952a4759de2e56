//! Three-wave Hamiltonian flow on ℂ³ and the reduced flow on a three-wave
//! surface.

pub mod ode;

pub use ode::{DenseSolution, IntegratorConfig, Method, StepStats};

use crate::error::{Error, Result};
use crate::geometry::{Covector, KahlerStructure, PhasePoint, TangentVector, C64};
use crate::reduction::{self, LeafPoint, ReducedPoint};
use crate::symmetry::{momentum, MomentumValue};

/// Closed forward time interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpan {
    pub t0: f64,
    pub t1: f64,
}

impl TimeSpan {
    pub fn new(t0: f64, t1: f64) -> Self {
        Self { t0, t1 }
    }

    pub fn until(t1: f64) -> Self {
        Self { t0: 0.0, t1 }
    }

    pub fn len(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn is_empty(&self) -> bool {
        !(self.t1 > self.t0)
    }
}

/// `H = −Re(q̄₁ q₂ q̄₃)`.
pub fn hamiltonian(q: &PhasePoint) -> f64 {
    -(q.0[0].conj() * q.0[1] * q.0[2].conj()).re
}

/// `dH` as a one-form, `α_k = 2∂H/∂q̄_k`.
pub fn hamiltonian_differential(q: &PhasePoint) -> Covector {
    let [a, b, c] = q.0;
    Covector([-(b * c.conj()), -(a * c), -(a.conj() * b)])
}

/// `X_H = (i w₁ q₂q̄₃, i w₂ q₁q₃, i w₃ q̄₁q₂)`.
pub fn vector_field(k: &KahlerStructure, q: &PhasePoint) -> TangentVector {
    let w = k.weights();
    let [a, b, c] = q.0;
    let i = C64::i();
    TangentVector([i * w[0] * b * c.conj(), i * w[1] * a * c, i * w[2] * a.conj() * b])
}

/// Largest deviation of the conserved quantities from their initial values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct InvariantDrift {
    pub hamiltonian: f64,
    pub k1: f64,
    pub k2: f64,
}

impl InvariantDrift {
    pub fn max(&self) -> f64 {
        self.hamiltonian.max(self.k1).max(self.k2)
    }
}

/// Numerical solution of Hamilton's equations on ℂ³.
#[derive(Debug, Clone)]
pub struct Trajectory {
    kahler: KahlerStructure,
    solution: DenseSolution<6>,
    drift: InvariantDrift,
}

impl Trajectory {
    pub fn kahler(&self) -> &KahlerStructure {
        &self.kahler
    }

    pub fn stats(&self) -> StepStats {
        self.solution.stats()
    }

    /// Drift measured on the accepted step grid.
    pub fn drift(&self) -> InvariantDrift {
        self.drift
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

    /// Points on the accepted step grid, starting with the initial condition.
    pub fn samples(&self) -> Vec<(f64, PhasePoint)> {
        to_points(self.solution.grid())
    }

    pub fn sample_uniform(&self, n: usize) -> Vec<(f64, PhasePoint)> {
        to_points(self.solution.sample_uniform(n))
    }
}

fn to_points(v: Vec<(f64, [f64; 6])>) -> Vec<(f64, PhasePoint)> {
    v.into_iter().map(|(t, x)| (t, PhasePoint::from_real(&x))).collect()
}

fn check_span(span: &TimeSpan) -> Result<()> {
    if !(span.t0.is_finite() && span.t1.is_finite()) || span.is_empty() {
        return Err(Error::InvalidConfig(format!("time span [{}, {}] is empty", span.t0, span.t1)));
    }
    Ok(())
}

/// Integrates the flow of `X_H` from `q0` over `span`.
pub fn integrate(k: &KahlerStructure, q0: &PhasePoint, span: TimeSpan, cfg: &IntegratorConfig) -> Result<Trajectory> {
    check_span(&span)?;
    if !q0.is_finite() {
        return Err(Error::NonFinite("initial phase point"));
    }
    let rhs = |_t: f64, x: &[f64; 6]| vector_field(k, &PhasePoint::from_real(x)).to_real();
    let solution = ode::solve(rhs, span.t0, q0.to_real(), span.t1, cfg)?;

    let h0 = hamiltonian(q0);
    let j0 = momentum(k, q0);
    let mut drift = InvariantDrift::default();
    for (_, x) in solution.grid() {
        let q = PhasePoint::from_real(&x);
        let j = momentum(k, &q);
        drift.hamiltonian = drift.hamiltonian.max((hamiltonian(&q) - h0).abs());
        drift.k1 = drift.k1.max((j.k1() - j0.k1()).abs());
        drift.k2 = drift.k2.max((j.k2() - j0.k2()).abs());
    }
    Ok(Trajectory { kahler: *k, solution, drift })
}

/// Solution of the reduced equations on the leaf of a fixed momentum value.
#[derive(Debug, Clone)]
pub struct ReducedTrajectory {
    kahler: KahlerStructure,
    mu: MomentumValue,
    solution: DenseSolution<3>,
    max_phi: f64,
}

impl ReducedTrajectory {
    pub fn kahler(&self) -> &KahlerStructure {
        &self.kahler
    }

    pub fn mu(&self) -> MomentumValue {
        self.mu
    }

    pub fn stats(&self) -> StepStats {
        self.solution.stats()
    }

    pub fn dense(&self) -> &DenseSolution<3> {
        &self.solution
    }

    pub fn span(&self) -> TimeSpan {
        TimeSpan::new(self.solution.t_start(), self.solution.t_end())
    }

    /// Largest `|φ|` seen on the accepted step grid.
    pub fn max_phi(&self) -> f64 {
        self.max_phi
    }

    pub fn at(&self, t: f64) -> LeafPoint {
        let c = self.solution.eval(t);
        LeafPoint::new(c[0], c[1], c[2], self.mu)
    }

    /// Point at time `t` with `Z₁` restored from the linear Casimir.
    pub fn reduced_at(&self, t: f64) -> ReducedPoint {
        self.at(t).to_reduced(&self.kahler)
    }

    pub fn initial(&self) -> LeafPoint {
        self.at(self.solution.t_start())
    }

    pub fn samples(&self) -> Vec<(f64, LeafPoint)> {
        self.solution.grid().into_iter().map(|(t, c)| (t, LeafPoint::new(c[0], c[1], c[2], self.mu))).collect()
    }

    pub fn sample_uniform(&self, n: usize) -> Vec<(f64, LeafPoint)> {
        self.solution
            .sample_uniform(n)
            .into_iter()
            .map(|(t, c)| (t, LeafPoint::new(c[0], c[1], c[2], self.mu)))
            .collect()
    }
}

/// Relative tolerance on `|φ(y₀)|` accepted by [`integrate_reduced`].
pub const SURFACE_TOL: f64 = 1e-8;

/// Integrates `(Ẋ, Ẏ, Ż₂) = (0, ∂φ/∂Z₂, −2(w₂+w₃)Y)` on the leaf of `y0.mu`.
pub fn integrate_reduced(
    k: &KahlerStructure,
    y0: &LeafPoint,
    span: TimeSpan,
    cfg: &IntegratorConfig,
) -> Result<ReducedTrajectory> {
    check_span(&span)?;
    if !y0.coords().iter().chain(y0.mu.0.iter()).all(|v| v.is_finite()) {
        return Err(Error::NonFinite("initial leaf point"));
    }
    let residual = reduction::phi(k, y0).abs();
    if residual > SURFACE_TOL * reduction::phi_scale(k, y0) {
        return Err(Error::OffSurface { residual });
    }
    let mu = y0.mu;
    let rhs = |_t: f64, c: &[f64; 3]| reduction::reduced_vector_field(k, &LeafPoint::new(c[0], c[1], c[2], mu));
    let solution = ode::solve(rhs, span.t0, y0.coords(), span.t1, cfg)?;
    let max_phi = solution
        .grid()
        .iter()
        .map(|(_, c)| reduction::phi(k, &LeafPoint::new(c[0], c[1], c[2], mu)).abs())
        .fold(0.0, f64::max);
    Ok(ReducedTrajectory { kahler: *k, mu, solution, max_phi })
}

fn distance3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// First return time of a reduced orbit to its initial point.
///
/// The section is `{Y = Y₀}` crossed in the initial direction; when `Ẏ₀` is
/// nearly zero relative to `Ż₂₀` the section `{Z₂ = Z₂₀}` is used instead.
/// The crossing is bracketed on the dense output, bisected, then polished by
/// Newton on the return time.
pub fn detect_period(rt: &ReducedTrajectory, tol: f64) -> Result<f64> {
    let k = rt.kahler();
    let y0 = rt.initial();
    let c0 = y0.coords();
    let rate = reduction::reduced_vector_field(k, &y0);
    let scale = reduction::phi_gradient(k, &y0).iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    if rate[1].abs().max(rate[2].abs()) <= 1e-12 * scale {
        return Err(Error::NotPeriodic);
    }
    let idx = if rate[1].abs() >= 1e-3 * rate[2].abs() { 1 } else { 2 };
    let dir = rate[idx].signum();
    let sol = rt.dense();
    let g = |t: f64| dir * (sol.eval(t)[idx] - c0[idx]);

    // scan the dense output, a few points per accepted step
    let t0 = sol.t_start();
    let mut times = Vec::new();
    for seg in sol.segments() {
        for j in 0..4 {
            times.push(seg.start() + (seg.end() - seg.start()) * j as f64 / 4.0);
        }
    }
    times.push(sol.t_end());
    let mut went_back = false;
    let mut bracket = None;
    for w in times.windows(2) {
        if w[0] <= t0 {
            continue;
        }
        let (ga, gb) = (g(w[0]), g(w[1]));
        if ga < 0.0 {
            went_back = true;
        }
        if went_back && ga < 0.0 && gb >= 0.0 {
            bracket = Some((w[0], w[1]));
            break;
        }
    }
    let (mut a, mut b) = bracket.ok_or(Error::NotPeriodic)?;
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
        if b - a <= 4.0 * f64::EPSILON * b.abs() {
            break;
        }
    }
    let mut t = 0.5 * (a + b);
    for _ in 0..3 {
        let dg = dir * reduction::reduced_vector_field(k, &rt.at(t))[idx];
        if dg.abs() < 1e-300 {
            break;
        }
        let next = t - g(t) / dg;
        if !(next.is_finite() && next >= a - (b - a) && next <= b + (b - a)) {
            break;
        }
        t = next;
    }
    let period = t - t0;
    let closure = distance3(sol.eval(t), c0);
    if !(closure < tol) {
        return Err(Error::NotPeriodic);
    }
    Ok(period)
}
