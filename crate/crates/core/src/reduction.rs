//! Poisson reduction of ℂ³ by the T² action.
//!
//! The orbit space is described by the invariants
//! `X + iY = q₁q̄₂q₃`, `Z₁ = |q₁|² − |q₂|²`, `Z₂ = |q₂|² − |q₃|²`. Every
//! [`ReducedPoint`] also carries the momentum value μ of the leaf it lives on.
//! The Casimirs `C₁`, `C₂` then become consistency checks rather than
//! equations to solve. On `{C₂ = 0}`, `Z₁` is an affine function of `Z₂` and
//! the leaf is the three-wave surface `{φ(X, Y, Z₂) = 0}`.
//!
//! Conventions:
//! * reduced Hamiltonian vector fields are `X_f = −∇φ × ∇f`;
//! * the leaf symplectic form is `ω_μ(v, w) = ∇φ·(v × w)/‖∇φ‖²`, normalised
//!   so that `ω_μ(Tπ u, Tπ v) = ω(u, v)` for `u, v ∈ Ker TJ`.

use crate::error::{Error, Result};
use crate::geometry::{KahlerStructure, PhasePoint, TangentVector, C64};
use crate::symmetry::{momentum, MomentumValue};

/// Relative tolerance for a point to count as lying on its declared leaf.
pub const LEAF_TOL: f64 = 1e-9;

/// Relative tolerance for recovered squared moduli.
pub const MODULUS_TOL: f64 = 1e-10;

/// Below this `‖∇φ‖` a leaf point is treated as singular.
pub const GRADIENT_TOL: f64 = 1e-12;

/// Point of the orbit space `ℂ³/T²`, labelled with its momentum value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedPoint {
    pub x: f64,
    pub y: f64,
    pub z1: f64,
    pub z2: f64,
    pub mu: MomentumValue,
}

/// Point of a three-wave surface: `(X, Y, Z₂)` with `Z₁` eliminated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafPoint {
    pub x: f64,
    pub y: f64,
    pub z2: f64,
    pub mu: MomentumValue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirValues {
    pub c1: f64,
    pub c2: f64,
}

impl ReducedPoint {
    pub fn new(x: f64, y: f64, z1: f64, z2: f64, mu: MomentumValue) -> Self {
        Self { x, y, z1, z2, mu }
    }

    pub fn coords(&self) -> [f64; 4] {
        [self.x, self.y, self.z1, self.z2]
    }

    pub fn leaf(&self) -> LeafPoint {
        LeafPoint::new(self.x, self.y, self.z2, self.mu)
    }

    /// Builds the orbit-space point with the given invariants, recovering μ.
    ///
    /// `|q₂|² = s` is the unique root of `(s + Z₁) s (s − Z₂) = X² + Y²` with
    /// all three moduli non-negative, so `(X, Y, Z₁, Z₂)` are global
    /// coordinates on the orbit space.
    pub fn from_invariants(k: &KahlerStructure, c: [f64; 4]) -> Result<Self> {
        let m = moduli_from_invariants(c)?;
        let w = k.weights();
        let mu = MomentumValue([0.5 * (m[0] / w[0] + m[1] / w[1]), 0.5 * (m[1] / w[1] + m[2] / w[2])]);
        Ok(Self::new(c[0], c[1], c[2], c[3], mu))
    }
}

impl LeafPoint {
    pub fn new(x: f64, y: f64, z2: f64, mu: MomentumValue) -> Self {
        Self { x, y, z2, mu }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.x, self.y, self.z2]
    }

    pub fn with_coords(&self, c: [f64; 3]) -> Self {
        Self::new(c[0], c[1], c[2], self.mu)
    }

    /// Restores `Z₁` from the linear Casimir.
    pub fn to_reduced(&self, k: &KahlerStructure) -> ReducedPoint {
        ReducedPoint::new(self.x, self.y, z1_from_constraint(k, self), self.z2, self.mu)
    }
}

/// Squared moduli `(|q₁|², |q₂|², |q₃|²)` determined by the invariants alone.
pub fn moduli_from_invariants(c: [f64; 4]) -> Result<[f64; 3]> {
    let [x, y, z1, z2] = c;
    if !c.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("orbit-space coordinates"));
    }
    let r = x * x + y * y;
    let s_min = 0.0f64.max(-z1).max(z2);
    // F(s) = (s+Z1)s(s-Z2) - R is increasing and convex on [s_min, ∞) with
    // F(s0) ≥ 0, so Newton from the right converges monotonically.
    let mut s = s_min + r.cbrt();
    for _ in 0..200 {
        let (a, b, d) = (s + z1, s, s - z2);
        let f = a * b * d - r;
        let df = b * d + a * d + a * b;
        if f <= 0.0 || df <= 0.0 {
            break;
        }
        let next = (s - f / df).max(s_min);
        if next >= s {
            break;
        }
        s = next;
    }
    Ok([(s + z1).max(0.0), s.max(0.0), (s - z2).max(0.0)])
}

/// Quotient map `π(q)` with the momentum label attached.
pub fn project(k: &KahlerStructure, q: &PhasePoint) -> ReducedPoint {
    let p = q.0[0] * q.0[1].conj() * q.0[2];
    let m = [q.0[0].norm_sqr(), q.0[1].norm_sqr(), q.0[2].norm_sqr()];
    ReducedPoint::new(p.re, p.im, m[0] - m[1], m[1] - m[2], momentum(k, q))
}

/// `Tπ(q)·w` in `(X, Y, Z₁, Z₂)` coordinates.
pub fn projection_differential(q: &PhasePoint, w: &TangentVector) -> [f64; 4] {
    let [q1, q2, q3] = q.0;
    let [w1, w2, w3] = w.0;
    let dp = w1 * q2.conj() * q3 + q1 * w2.conj() * q3 + q1 * q2.conj() * w3;
    let dm = |a: C64, b: C64| 2.0 * (a.conj() * b).re;
    let (d1, d2, d3) = (dm(q1, w1), dm(q2, w2), dm(q3, w3));
    [dp.re, dp.im, d1 - d2, d2 - d3]
}

pub fn kappa4(k: &KahlerStructure) -> f64 {
    let w = k.weights();
    w[0] * w[1] * w[2] / ((w[0] + w[1]) * (w[1] + w[2]).powi(2))
}

pub fn kappa3(k: &KahlerStructure) -> f64 {
    let w = k.weights();
    w[0] * w[1] * w[2] / (w[1] + w[2]).powi(3)
}

/// `δ = 2w₂K₁ + 2w₃(K₁ − K₂)`.
pub fn delta(k: &KahlerStructure, mu: &MomentumValue) -> f64 {
    let w = k.weights();
    2.0 * w[1] * mu.k1() + 2.0 * w[2] * (mu.k1() - mu.k2())
}

// Cubic factors of C1: (2w2K1 + Z1), (2w3K2 + Z2), (2w2K2 - Z2).
fn c1_factors(k: &KahlerStructure, y: &ReducedPoint) -> (f64, f64, f64) {
    let w = k.weights();
    let [k1, k2] = y.mu.0;
    (2.0 * w[1] * k1 + y.z1, 2.0 * w[2] * k2 + y.z2, 2.0 * w[1] * k2 - y.z2)
}

pub fn casimirs(k: &KahlerStructure, y: &ReducedPoint) -> CasimirValues {
    let w = k.weights();
    let (a, b, c) = c1_factors(k, y);
    let c1 = y.x * y.x + y.y * y.y - kappa4(k) * a * b * c;
    let c2 = (y.z1 - 2.0 * w[0] * y.mu.k1()) * (w[1] + w[2]) + (y.z2 + 2.0 * w[2] * y.mu.k2()) * (w[0] + w[1]);
    CasimirValues { c1, c2 }
}

/// Magnitudes used to make the Casimir residuals relative.
pub fn casimir_scales(k: &KahlerStructure, y: &ReducedPoint) -> [f64; 2] {
    let w = k.weights();
    let (a, b, c) = c1_factors(k, y);
    let s1 = y.x * y.x + y.y * y.y + (kappa4(k) * a * b * c).abs();
    let s2 = ((y.z1 - 2.0 * w[0] * y.mu.k1()) * (w[1] + w[2])).abs()
        + ((y.z2 + 2.0 * w[2] * y.mu.k2()) * (w[0] + w[1])).abs();
    [s1.max(1.0), s2.max(1.0)]
}

/// Gradients `(∇C₁, ∇C₂)` in `(X, Y, Z₁, Z₂)` at fixed μ.
pub fn casimir_gradients(k: &KahlerStructure, y: &ReducedPoint) -> ([f64; 4], [f64; 4]) {
    let w = k.weights();
    let (a, b, c) = c1_factors(k, y);
    let k4 = kappa4(k);
    let g1 = [2.0 * y.x, 2.0 * y.y, -k4 * b * c, -k4 * a * (c - b)];
    let g2 = [0.0, 0.0, w[1] + w[2], w[0] + w[1]];
    (g1, g2)
}

/// Solves `C₂ = 0` for `Z₁`.
pub fn z1_from_constraint(k: &KahlerStructure, y3: &LeafPoint) -> f64 {
    let w = k.weights();
    2.0 * w[0] * y3.mu.k1() - (y3.z2 + 2.0 * w[2] * y3.mu.k2()) * (w[0] + w[1]) / (w[1] + w[2])
}

/// `dZ₁/dZ₂` along a leaf.
pub fn z1_slope(k: &KahlerStructure) -> f64 {
    let w = k.weights();
    -(w[0] + w[1]) / (w[1] + w[2])
}

/// Embeds an `(X, Y, Z₂)` leaf tangent into `(X, Y, Z₁, Z₂)`.
pub fn leaf_tangent(k: &KahlerStructure, v: [f64; 3]) -> [f64; 4] {
    [v[0], v[1], z1_slope(k) * v[2], v[2]]
}

// (δ - Z2)(2w3K2 + Z2)(2w2K2 - Z2) and its Z2-derivative.
fn surface_cubic(k: &KahlerStructure, y3: &LeafPoint) -> (f64, f64) {
    let w = k.weights();
    let d = delta(k, &y3.mu) - y3.z2;
    let b = 2.0 * w[2] * y3.mu.k2() + y3.z2;
    let c = 2.0 * w[1] * y3.mu.k2() - y3.z2;
    (d * b * c, -b * c + d * (c - b))
}

/// Right-hand side `κ₃(δ − Z₂)(2w₃K₂ + Z₂)(2w₂K₂ − Z₂)` of `X² + Y² = F(Z₂)`.
pub fn surface_profile(k: &KahlerStructure, mu: &MomentumValue, z2: f64) -> (f64, f64) {
    let (f, df) = surface_cubic(k, &LeafPoint::new(0.0, 0.0, z2, *mu));
    (kappa3(k) * f, kappa3(k) * df)
}

/// Three-wave surface function `φ(X, Y, Z₂; μ)`.
pub fn phi(k: &KahlerStructure, y3: &LeafPoint) -> f64 {
    let w = k.weights();
    let (f, _) = surface_cubic(k, y3);
    (w[1] + w[2]) * (y3.x * y3.x + y3.y * y3.y - kappa3(k) * f)
}

pub fn phi_gradient(k: &KahlerStructure, y3: &LeafPoint) -> [f64; 3] {
    let w = k.weights();
    let (_, df) = surface_cubic(k, y3);
    let s = w[1] + w[2];
    [2.0 * s * y3.x, 2.0 * s * y3.y, -s * kappa3(k) * df]
}

/// Scale used to make `φ` residuals relative.
pub fn phi_scale(k: &KahlerStructure, y3: &LeafPoint) -> f64 {
    let w = k.weights();
    let (f, _) = surface_cubic(k, y3);
    ((w[1] + w[2]).abs() * (y3.x * y3.x + y3.y * y3.y + (kappa3(k) * f).abs())).max(1.0)
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let minor = |r: usize, c: usize| -> f64 {
        let mut s = [[0.0; 3]; 3];
        let mut ri = 0;
        for (i, row) in m.iter().enumerate() {
            if i == r {
                continue;
            }
            let mut ci = 0;
            for (j, v) in row.iter().enumerate() {
                if j == c {
                    continue;
                }
                s[ri][ci] = *v;
                ci += 1;
            }
            ri += 1;
        }
        s[0][0] * (s[1][1] * s[2][2] - s[1][2] * s[2][1]) - s[0][1] * (s[1][0] * s[2][2] - s[1][2] * s[2][0])
            + s[0][2] * (s[1][0] * s[2][1] - s[1][1] * s[2][0])
    };
    (0..4)
        .map(|c| {
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[0][c] * minor(0, c)
        })
        .sum()
}

/// Reduced Poisson bracket `{f, k} = det(∇C₂ ∇C₁ ∇f ∇k)` on the orbit space.
///
/// The gradients are columns, in `(X, Y, Z₁, Z₂)` order. With this
/// normalisation `{Y, −X}` reproduces `Tπ X_H` exactly.
pub fn reduced_bracket_4d(k: &KahlerStructure, grad_f: [f64; 4], grad_k: [f64; 4], y: &ReducedPoint) -> f64 {
    let (g1, g2) = casimir_gradients(k, y);
    let mut m = [[0.0; 4]; 4];
    for r in 0..4 {
        m[r] = [g2[r], g1[r], grad_f[r], grad_k[r]];
    }
    det4(m)
}

pub fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Reduced bracket on a leaf chart: `{f, k} = ∇φ·(∇f × ∇k)`.
pub fn reduced_bracket_3d(k: &KahlerStructure, y3: &LeafPoint, grad_f: [f64; 3], grad_k: [f64; 3]) -> f64 {
    dot3(phi_gradient(k, y3), cross(grad_f, grad_k))
}

/// Reduced three-wave flow `(Ẋ, Ẏ, Ż₂) = (0, ∂φ/∂Z₂, −2(w₂ + w₃)Y)`.
pub fn reduced_vector_field(k: &KahlerStructure, y3: &LeafPoint) -> [f64; 3] {
    let w = k.weights();
    let g = phi_gradient(k, y3);
    [0.0, g[2], -2.0 * (w[1] + w[2]) * y3.y]
}

/// Hamiltonian vector field `X_f = −∇φ × ∇f` of a reduced function.
pub fn hamiltonian_vector_field_3d(k: &KahlerStructure, y3: &LeafPoint, grad_f: [f64; 3]) -> [f64; 3] {
    let c = cross(phi_gradient(k, y3), grad_f);
    [-c[0], -c[1], -c[2]]
}

/// Leaf symplectic form `ω_μ(v, w) = ∇φ·(v × w)/‖∇φ‖²`.
pub fn reduced_symplectic(k: &KahlerStructure, y3: &LeafPoint, v: [f64; 3], w: [f64; 3]) -> Result<f64> {
    let g = phi_gradient(k, y3);
    let n2 = dot3(g, g);
    if n2.sqrt() < GRADIENT_TOL {
        return Err(Error::SingularLeafPoint);
    }
    Ok(dot3(g, cross(v, w)) / n2)
}

/// Central-difference gradient with step `1e-6·max(1, |x_i|)`.
pub fn numeric_gradient<const N: usize>(f: impl Fn([f64; N]) -> f64, at: [f64; N]) -> [f64; N] {
    let mut g = [0.0; N];
    for i in 0..N {
        let h = 1e-6 * at[i].abs().max(1.0);
        let mut p = at;
        let mut m = at;
        p[i] += h;
        m[i] -= h;
        g[i] = (f(p) - f(m)) / (2.0 * h);
    }
    g
}

/// Reads the carried μ after checking that it labels the leaf through `y`.
pub fn momentum_on_quotient(k: &KahlerStructure, y: &ReducedPoint) -> Result<MomentumValue> {
    let c = casimirs(k, y);
    let s = casimir_scales(k, y);
    if c.c1.abs() > LEAF_TOL * s[0] || c.c2.abs() > LEAF_TOL * s[1] || !(c.c1.is_finite() && c.c2.is_finite()) {
        return Err(Error::InconsistentLeafLabel { c1: c.c1, c2: c.c2 });
    }
    Ok(y.mu)
}

/// Local section of π: the fiber point with `q₁, q₃` real and non-negative.
pub fn reconstruct_point(k: &KahlerStructure, y: &ReducedPoint) -> Result<PhasePoint> {
    let w = k.weights();
    let [k1, k2] = y.mu.0;
    let m2 = (2.0 * w[2] * k2 + y.z2) * w[1] / (w[1] + w[2]);
    let m = [m2 + y.z1, m2, m2 - y.z2];
    let scale = m.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if let Some(j) = (0..3).find(|&j| m[j] < -MODULUS_TOL * scale) {
        return Err(Error::InfeasibleLeafData(format!("|q{}|² = {:.3e} is negative", j + 1, m[j])));
    }
    let m = m.map(|v| v.max(0.0));
    let k1_check = 0.5 * (m[0] / w[0] + m[1] / w[1]);
    if (k1_check - k1).abs() > LEAF_TOL * (k1.abs() + k1_check.abs()).max(1.0) {
        return Err(Error::InfeasibleLeafData(format!("moduli give K1 = {k1_check:.6e}, carried K1 = {k1:.6e}")));
    }
    let r = (y.x * y.x + y.y * y.y).sqrt();
    let prod = (m[0] * m[1] * m[2]).sqrt();
    if (prod - r).abs() > LEAF_TOL * prod.max(r).max(1.0) {
        return Err(Error::InfeasibleLeafData(format!("|q1||q2||q3| = {prod:.6e} but |X + iY| = {r:.6e}")));
    }
    if m[0] <= MODULUS_TOL * scale || m[2] <= MODULUS_TOL * scale {
        return Err(Error::GaugeUndefined);
    }
    let arg = y.y.atan2(y.x);
    Ok(PhasePoint([C64::new(m[0].sqrt(), 0.0), C64::from_polar(m[1].sqrt(), -arg), C64::new(m[2].sqrt(), 0.0)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Sign;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mu11() -> MomentumValue {
        MomentumValue([1.0, 1.0])
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn project_reference_values() {
        let k = KahlerStructure::unit();
        let y = project(&k, &PhasePoint::zero());
        assert_eq!(y.coords(), [0.0; 4]);
        assert_eq!(y.mu.0, [0.0; 2]);
        let ones = PhasePoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let y = project(&k, &ones);
        assert_eq!(y.coords(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(y.mu.0, [1.0, 1.0]);
        let shifted = PhasePoint::new(c(0.0, -1.0), c(0.0, -1.0), c(1.0, 0.0));
        assert_eq!(project(&k, &shifted).coords(), [1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn projection_differential_reference_value() {
        let ones = PhasePoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0));
        let w = TangentVector::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(projection_differential(&ones, &w), [2.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn casimir_reference_values() {
        let k = KahlerStructure::unit();
        close(kappa4(&k), 0.125, 1e-16);
        let cv = casimirs(&k, &ReducedPoint::new(1.0, 0.0, 0.0, 0.0, mu11()));
        assert_eq!((cv.c1, cv.c2), (0.0, 0.0));
        let cv = casimirs(&k, &ReducedPoint::new(1.1, 0.0, 0.0, 0.0, mu11()));
        close(cv.c1, 0.21, 1e-15);
        assert_eq!(cv.c2, 0.0);
    }

    #[test]
    fn z1_constraint_reference_values() {
        let k = KahlerStructure::unit();
        assert_eq!(z1_from_constraint(&k, &LeafPoint::new(0.0, 0.0, 0.0, mu11())), 0.0);
        assert_eq!(z1_from_constraint(&k, &LeafPoint::new(0.0, 0.0, 2.0, mu11())), -2.0);
    }

    #[test]
    fn phi_reference_values() {
        let k = KahlerStructure::unit();
        let p = LeafPoint::new(1.0, 0.0, 0.0, mu11());
        close(kappa3(&k), 0.125, 1e-16);
        close(delta(&k, &p.mu), 2.0, 1e-16);
        assert_eq!(phi(&k, &p), 0.0);
        assert_eq!(phi_gradient(&k, &p), [4.0, 0.0, 1.0]);
        let g = numeric_gradient(|v| phi(&k, &p.with_coords(v)), p.coords());
        for (a, b) in g.iter().zip(phi_gradient(&k, &p)) {
            close(*a, b, 1e-8);
        }
    }

    #[test]
    fn reduced_vector_field_reference_values() {
        let k = KahlerStructure::unit();
        let p = LeafPoint::new(1.0, 0.0, 0.0, mu11());
        assert_eq!(reduced_vector_field(&k, &p), [0.0, 1.0, 0.0]);
        let q = LeafPoint::new(0.4, 0.0, -0.3, mu11());
        assert_eq!(reduced_vector_field(&k, &q)[2], 0.0);
        let r = LeafPoint::new(0.3, 0.7, -0.2, MomentumValue([0.8, 1.1]));
        let hv = hamiltonian_vector_field_3d(&k, &r, [-1.0, 0.0, 0.0]);
        let fv = reduced_vector_field(&k, &r);
        for i in 0..3 {
            close(hv[i], fv[i], 1e-14);
        }
    }

    #[test]
    fn reduced_symplectic_reference_values() {
        let k = KahlerStructure::unit();
        let p = LeafPoint::new(1.0, 0.0, 0.0, mu11());
        let v = [0.0, 1.0, 0.0];
        assert_eq!(reduced_symplectic(&k, &p, v, v).unwrap(), 0.0);
        // the printed form carries the opposite overall sign (-4/17)
        close(reduced_symplectic(&k, &p, v, [0.0, 0.0, 1.0]).unwrap(), 4.0 / 17.0, 1e-15);
        // ω(X_h, v) = dh(v) = -dX(v) for tangent v
        let xh = reduced_vector_field(&k, &p);
        let t = [1.0, 0.0, -4.0];
        close(reduced_symplectic(&k, &p, xh, t).unwrap(), -1.0, 1e-14);
    }

    #[test]
    fn reduced_symplectic_singular_point() {
        let k = KahlerStructure::unit();
        // the surface cubic has a double root at Z2 = 2K2 when δ = 2K2
        let mu = MomentumValue([1.0, 1.0]);
        let p = LeafPoint::new(0.0, 0.0, 2.0, mu);
        assert!(matches!(reduced_symplectic(&k, &p, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), Err(Error::SingularLeafPoint)));
    }

    #[test]
    fn bracket_4d_reference_values() {
        let k = KahlerStructure::unit();
        let y = ReducedPoint::new(1.0, 0.0, 0.0, 0.0, mu11());
        let g = [0.3, -0.2, 0.5, 1.0];
        assert_eq!(reduced_bracket_4d(&k, g, g, &y), 0.0);
        let (g1, g2) = casimir_gradients(&k, &y);
        assert_eq!(reduced_bracket_4d(&k, g, g1, &y), 0.0);
        assert_eq!(reduced_bracket_4d(&k, g2, g, &y), 0.0);
        let ydot = reduced_bracket_4d(&k, [0.0, 1.0, 0.0, 0.0], [-1.0, 0.0, 0.0, 0.0], &y);
        close(ydot, 1.0, 1e-15);
    }

    #[test]
    fn reconstruct_reference_values() {
        let k = KahlerStructure::unit();
        let q = reconstruct_point(&k, &ReducedPoint::new(1.0, 0.0, 0.0, 0.0, mu11())).unwrap();
        for j in 0..3 {
            assert!((q.0[j] - c(1.0, 0.0)).norm() < 1e-15);
        }
        let bad = ReducedPoint::new(1.0, 0.0, 0.0, 0.0, MomentumValue([0.0, 0.0]));
        assert!(matches!(reconstruct_point(&k, &bad), Err(Error::InfeasibleLeafData(_))));
        // q1 = 0: the gauge q1 ≥ 0 real says nothing about arg q2
        let q = PhasePoint::new(c(0.0, 0.0), c(1.0, 0.5), c(0.3, 0.2));
        assert!(matches!(reconstruct_point(&k, &project(&k, &q)), Err(Error::GaugeUndefined)));
    }

    #[test]
    fn momentum_on_quotient_reference_values() {
        let k = KahlerStructure::unit();
        let y = ReducedPoint::new(1.0, 0.0, 0.0, 0.0, mu11());
        assert_eq!(momentum_on_quotient(&k, &y).unwrap().0, [1.0, 1.0]);
        let y = ReducedPoint::new(1.0, 0.0, 0.0, 0.0, MomentumValue([2.0, 2.0]));
        assert!(matches!(momentum_on_quotient(&k, &y), Err(Error::InconsistentLeafLabel { .. })));
    }

    #[test]
    fn from_invariants_recovers_momentum() {
        let k = KahlerStructure::new([Sign::Plus; 3], [0.7, 1.4, 2.3]).unwrap();
        let q = PhasePoint::new(c(0.3, 1.0), c(-0.7, 0.2), c(1.1, -0.4));
        let y = project(&k, &q);
        let r = ReducedPoint::from_invariants(&k, y.coords()).unwrap();
        close(r.mu.k1(), y.mu.k1(), 1e-14);
        close(r.mu.k2(), y.mu.k2(), 1e-14);
    }

    #[test]
    fn phi_is_scaled_c1_on_the_constraint() {
        let k = KahlerStructure::new([Sign::Plus, Sign::Minus, Sign::Plus], [0.9, 0.4, 1.7]).unwrap();
        let w = k.weights();
        let mu = MomentumValue([0.6, -0.3]);
        for &(x, yy, z2) in &[(0.2, 0.1, 0.4), (-1.0, 0.5, -0.7), (0.0, 2.0, 1.3)] {
            let p = LeafPoint::new(x, yy, z2, mu);
            let c1 = casimirs(&k, &p.to_reduced(&k)).c1;
            close(phi(&k, &p), (w[1] + w[2]) * c1, 1e-13);
        }
    }
}
