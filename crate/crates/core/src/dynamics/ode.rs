//! Explicit Runge–Kutta integration with dense output.
//!
//! Two methods share one dense representation:
//!
//! * Dormand–Prince 5(4) with PI step-size control and the standard
//!   fourth-order continuous extension;
//! * classical fixed-step RK4 with cubic Hermite interpolation.
//!
//! Each accepted step is stored as a [`Segment`] holding the coefficients of
//! `y(t₀ + θh) = r₁ + θ(r₂ + (1−θ)(r₃ + θ(r₄ + (1−θ)r₅)))`; the Hermite
//! interpolant is the same formula with `r₅ = 0`.

use crate::error::{Error, Result};

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Classical RK4 with step `max_step`.
    Rk4,
    /// Adaptive embedded Dormand–Prince 5(4).
    Dopri5,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step; the fixed step for [`Method::Rk4`].
    pub max_step: f64,
    pub method: Method,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-10, max_step: 0.1, method: Method::Dopri5, max_steps: 1_000_000 }
    }
}

impl IntegratorConfig {
    pub fn with_tolerance(tol: f64) -> Self {
        Self { rel_tol: tol, abs_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("rel_tol = {} must be positive", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("abs_tol = {} must be positive", self.abs_tol)));
        }
        if !(self.max_step > 0.0 && self.max_step.is_finite()) {
            return Err(Error::InvalidConfig(format!("max_step = {} must be positive", self.max_step)));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be nonzero".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Dense interpolant over one accepted step.
#[derive(Debug, Clone)]
pub struct Segment<const N: usize> {
    t0: f64,
    h: f64,
    r: [[f64; N]; 5],
}

impl<const N: usize> Segment<N> {
    pub fn eval(&self, t: f64) -> [f64; N] {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        let r = &self.r;
        std::array::from_fn(|i| r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i]))))
    }

    pub fn start(&self) -> f64 {
        self.t0
    }

    pub fn end(&self) -> f64 {
        self.t0 + self.h
    }

    pub fn end_state(&self) -> [f64; N] {
        std::array::from_fn(|i| self.r[0][i] + self.r[1][i])
    }
}

/// A solution on `[t₀, t₁]` that can be evaluated at any time.
#[derive(Debug, Clone)]
pub struct DenseSolution<const N: usize> {
    t0: f64,
    y0: [f64; N],
    segments: Vec<Segment<N>>,
    stats: StepStats,
}

impl<const N: usize> DenseSolution<N> {
    pub fn t_start(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.segments.last().map_or(self.t0, |s| s.end())
    }

    pub fn stats(&self) -> StepStats {
        self.stats
    }

    pub fn initial_state(&self) -> [f64; N] {
        self.y0
    }

    pub fn final_state(&self) -> [f64; N] {
        self.segments.last().map_or(self.y0, |s| s.end_state())
    }

    pub fn segments(&self) -> &[Segment<N>] {
        &self.segments
    }

    /// Evaluates the interpolant; times outside the span are clamped.
    pub fn eval(&self, t: f64) -> [f64; N] {
        if t <= self.t0 {
            return self.y0;
        }
        if t >= self.t_end() {
            return self.final_state();
        }
        let idx = self.segments.partition_point(|s| s.end() < t);
        self.segments[idx.min(self.segments.len() - 1)].eval(t)
    }

    /// Accepted step grid, starting with the initial condition.
    pub fn grid(&self) -> Vec<(f64, [f64; N])> {
        let mut out = Vec::with_capacity(self.segments.len() + 1);
        out.push((self.t0, self.y0));
        out.extend(self.segments.iter().map(|s| (s.end(), s.end_state())));
        out
    }

    /// `n + 1` equally spaced samples covering the whole span.
    pub fn sample_uniform(&self, n: usize) -> Vec<(f64, [f64; N])> {
        let n = n.max(1);
        let (a, b) = (self.t0, self.t_end());
        (0..=n)
            .map(|i| {
                let t = if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
                (t, self.eval(t))
            })
            .collect()
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(&[f64; N], f64)]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(k, c)| c * k[i]).sum::<f64>())
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    if N == 0 {
        return 0.0;
    }
    (v.iter().zip(scale).map(|(a, s)| (a / s).powi(2)).sum::<f64>() / N as f64).sqrt()
}

/// Integrates `y' = f(t, y)` forward from `t0` to `t1`.
pub fn solve<const N: usize, F>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<DenseSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    cfg.validate()?;
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::InvalidConfig(format!("time span [{t0}, {t1}] is not a forward interval")));
    }
    if !y0.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    match cfg.method {
        Method::Rk4 => solve_rk4(&mut f, t0, y0, t1, cfg),
        Method::Dopri5 => solve_dopri5(&mut f, t0, y0, t1, cfg),
    }
}

fn solve_rk4<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<DenseSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut sol = DenseSolution { t0, y0, segments: Vec::new(), stats: StepStats::default() };
    if t1 == t0 {
        return Ok(sol);
    }
    let n = ((t1 - t0) / cfg.max_step).ceil().max(1.0) as usize;
    if n > cfg.max_steps {
        return Err(Error::MaxStepsExceeded(cfg.max_steps));
    }
    let h = (t1 - t0) / n as f64;
    let mut y = y0;
    let mut k1 = f(t0, &y);
    sol.stats.evaluations += 1;
    for i in 0..n {
        let t = t0 + h * i as f64;
        let k2 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &[(&k1, 1.0)]));
        let k3 = f(t + 0.5 * h, &axpy(&y, 0.5 * h, &[(&k2, 1.0)]));
        let k4 = f(t + h, &axpy(&y, h, &[(&k3, 1.0)]));
        let y1 = axpy(&y, h / 6.0, &[(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)]);
        if !y1.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("integrator state"));
        }
        let f1 = f(t + h, &y1);
        sol.stats.evaluations += 4;
        let r2: [f64; N] = std::array::from_fn(|j| y1[j] - y[j]);
        let r3: [f64; N] = std::array::from_fn(|j| h * k1[j] - r2[j]);
        let r4: [f64; N] = std::array::from_fn(|j| r2[j] - h * f1[j] - r3[j]);
        sol.segments.push(Segment { t0: t, h, r: [y, r2, r3, r4, [0.0; N]] });
        sol.stats.accepted += 1;
        y = y1;
        k1 = f1;
    }
    Ok(sol)
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const FAC_MIN_INV: f64 = 5.0; // steps shrink by at most 5x
const FAC_MAX_INV: f64 = 0.1; // and grow by at most 10x
const BETA: f64 = 0.04;

fn solve_dopri5<const N: usize, F>(
    f: &mut F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    cfg: &IntegratorConfig,
) -> Result<DenseSolution<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut sol = DenseSolution { t0, y0, segments: Vec::new(), stats: StepStats::default() };
    if t1 == t0 {
        return Ok(sol);
    }
    let scale_of = |a: &[f64; N], b: &[f64; N]| -> [f64; N] {
        std::array::from_fn(|i| cfg.abs_tol + cfg.rel_tol * a[i].abs().max(b[i].abs()))
    };

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    sol.stats.evaluations += 1;

    let mut h = initial_step(f, t, &y, &k1, cfg, &mut sol.stats).min(t1 - t0);
    let expo1 = 0.2 - BETA * 0.75;
    let mut facold: f64 = 1e-4;
    let mut reject = false;
    let mut steps = 0usize;

    loop {
        if steps >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        if 0.1 * h.abs() <= t.abs().max(1.0) * f64::EPSILON {
            return Err(Error::StepSizeUnderflow { t });
        }
        let mut last = false;
        if t + 1.01 * h >= t1 {
            h = t1 - t;
            last = true;
        }
        steps += 1;

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(&k1, A21)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(&k1, A31), (&k2, A32)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(&k1, A41), (&k2, A42), (&k3, A43)]));
        let k5 = f(t + C5 * h, &axpy(&y, h, &[(&k1, A51), (&k2, A52), (&k3, A53), (&k4, A54)]));
        let ysti = axpy(&y, h, &[(&k1, A61), (&k2, A62), (&k3, A63), (&k4, A64), (&k5, A65)]);
        let k6 = f(t + h, &ysti);
        let y1 = axpy(&y, h, &[(&k1, A71), (&k3, A73), (&k4, A74), (&k5, A75), (&k6, A76)]);
        let k7 = f(t + h, &y1);
        sol.stats.evaluations += 6;

        let errv: [f64; N] =
            std::array::from_fn(|i| h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]));
        let err = rms_norm(&errv, &scale_of(&y, &y1));
        if !err.is_finite() {
            // non-finite stage values: shrink hard and retry
            sol.stats.rejected += 1;
            reject = true;
            h *= 0.1;
            continue;
        }

        let fac11 = err.powf(expo1);
        let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(FAC_MAX_INV, FAC_MIN_INV);
        let mut hnew = h / fac;

        if err <= 1.0 {
            facold = err.max(1e-4);
            sol.stats.accepted += 1;
            let ydiff: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let bspl: [f64; N] = std::array::from_fn(|i| h * k1[i] - ydiff[i]);
            let r4: [f64; N] = std::array::from_fn(|i| ydiff[i] - h * k7[i] - bspl[i]);
            let r5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            sol.segments.push(Segment { t0: t, h, r: [y, ydiff, bspl, r4, r5] });
            k1 = k7;
            y = y1;
            t += h;
            if last {
                break;
            }
            if reject {
                hnew = hnew.min(h);
            }
            reject = false;
            h = hnew.min(cfg.max_step);
        } else {
            hnew = h / (fac11 / SAFE).min(FAC_MIN_INV);
            reject = true;
            sol.stats.rejected += 1;
            h = hnew;
        }
    }
    Ok(sol)
}

fn initial_step<const N: usize, F>(
    f: &mut F,
    t: f64,
    y: &[f64; N],
    f0: &[f64; N],
    cfg: &IntegratorConfig,
    stats: &mut StepStats,
) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sk: [f64; N] = std::array::from_fn(|i| cfg.abs_tol + cfg.rel_tol * y[i].abs());
    let dnf = rms_norm(f0, &sk).powi(2);
    let dny = rms_norm(y, &sk).powi(2);
    let mut h = if dnf <= 1e-10 || dny <= 1e-10 { 1e-6 } else { (dny / dnf).sqrt() * 0.01 };
    h = h.min(cfg.max_step);
    let y1 = axpy(y, h, &[(f0, 1.0)]);
    let f1 = f(t + h, &y1);
    stats.evaluations += 1;
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let der2 = rms_norm(&diff, &sk) / h;
    let der12 = der2.abs().max(dnf.sqrt());
    let h1 = if der12 <= 1e-15 { (h * 1e-3).max(1e-6) } else { (0.01 / der12).powf(0.2) };
    (100.0 * h).min(h1).min(cfg.max_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oscillator(_t: f64, y: &[f64; 2]) -> [f64; 2] {
        [y[1], -y[0]]
    }

    #[test]
    fn dopri5_harmonic_oscillator() {
        let cfg = IntegratorConfig::with_tolerance(1e-12);
        let sol = solve(oscillator, 0.0, [1.0, 0.0], 10.0, &cfg).unwrap();
        let y = sol.final_state();
        assert!((y[0] - 10f64.cos()).abs() < 1e-10);
        assert!((y[1] + 10f64.sin()).abs() < 1e-10);
        assert_eq!(sol.t_end(), 10.0);
        // dense output between grid points
        for i in 0..50 {
            let t = 0.193 * i as f64;
            let y = sol.eval(t);
            assert!((y[0] - t.cos()).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn rk4_converges_at_fourth_order() {
        let err = |h: f64| {
            let cfg = IntegratorConfig { method: Method::Rk4, max_step: h, ..Default::default() };
            let sol = solve(oscillator, 0.0, [1.0, 0.0], 2.0, &cfg).unwrap();
            (sol.final_state()[0] - 2f64.cos()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }

    #[test]
    fn tolerance_controls_error() {
        let err = |tol: f64| {
            let cfg = IntegratorConfig::with_tolerance(tol);
            let sol = solve(oscillator, 0.0, [1.0, 0.0], 20.0, &cfg).unwrap();
            (sol.final_state()[0] - 20f64.cos()).abs()
        };
        assert!(err(1e-10) < err(1e-6));
    }

    #[test]
    fn empty_span_and_bad_config() {
        let cfg = IntegratorConfig::default();
        let sol = solve(oscillator, 1.0, [1.0, 0.0], 1.0, &cfg).unwrap();
        assert_eq!(sol.final_state(), [1.0, 0.0]);
        assert!(solve(oscillator, 1.0, [1.0, 0.0], 0.0, &cfg).is_err());
        let bad = IntegratorConfig { rel_tol: 0.0, ..cfg };
        assert!(matches!(solve(oscillator, 0.0, [1.0, 0.0], 1.0, &bad), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn blow_up_reports_failure() {
        // y' = y², y(0) = 1 blows up at t = 1
        let cfg = IntegratorConfig::with_tolerance(1e-8);
        let r = solve(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 2.0, &cfg);
        assert!(matches!(r, Err(Error::StepSizeUnderflow { .. }) | Err(Error::MaxStepsExceeded(_))));
    }
}
