//! The T² action on ℂ³ and the objects it induces: generators, momentum map,
//! locked inertia tensor and the mechanical connection.
//!
//! The torus acts by
//! `(q₁, q₂, q₃) ↦ (e^{−iθ¹}q₁, e^{−i(θ¹+θ²)}q₂, e^{−iθ²}q₃)`, with momentum map
//! `K₁ = ½(|q₁|²/w₁ + |q₂|²/w₂)`, `K₂ = ½(|q₂|²/w₂ + |q₃|²/w₃)`.
//!
//! The connection one-form is `𝒜(q)·w = 𝕀⁻¹(q)·(𝔰(e¹_P, w), 𝔰(e²_P, w))`, whose
//! kernel is the metric-orthogonal complement of the group orbit. Written out
//! for this action it reads
//! `𝒜·w = −𝕀⁻¹·Im(q̄₁w₁/w₁ + q̄₂w₂/w₂, q̄₂w₂/w₂ + q̄₃w₃/w₃)`; the leading minus
//! comes from the `e^{−iθ}` orientation of the action and agrees with
//! `𝕀⁻¹·TJ(𝒥w)`, since `TJ(i w)` produces `Re(i·…) = −Im(…)`.

use std::f64::consts::TAU;

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::geometry::{self, Covector, KahlerStructure, PhasePoint, TangentVector, C64};
use crate::reduction::ReducedPoint;

/// Relative threshold on `|det 𝕀|` below which a point is treated as singular.
pub const REGULARITY_TOL: f64 = 1e-10;

/// Element `ξ = (ξ¹, ξ²)` of the Lie algebra `t² ≅ ℝ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement(pub [f64; 2]);

/// Element `ν = (ν₁, ν₂)` of the dual algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoAlgebraElement(pub [f64; 2]);

/// Momentum value `μ = (K₁, K₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumValue(pub [f64; 2]);

impl AlgebraElement {
    pub fn basis(k: usize) -> Self {
        let mut e = [0.0; 2];
        e[k] = 1.0;
        Self(e)
    }
}

impl CoAlgebraElement {
    pub fn basis(k: usize) -> Self {
        let mut e = [0.0; 2];
        e[k] = 1.0;
        Self(e)
    }
}

impl MomentumValue {
    pub fn k1(&self) -> f64 {
        self.0[0]
    }

    pub fn k2(&self) -> f64 {
        self.0[1]
    }
}

/// Torus element with both angles reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    theta: [f64; 2],
}

/// Reduces an angle to `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wraps an angle difference into `(−π, π]`.
pub fn wrap_to_pi(a: f64) -> f64 {
    let r = normalize_angle(a);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

impl GroupElement {
    pub fn new(theta: [f64; 2]) -> Self {
        Self { theta: [normalize_angle(theta[0]), normalize_angle(theta[1])] }
    }

    pub fn identity() -> Self {
        Self { theta: [0.0; 2] }
    }

    /// `exp(ξ)`; for the torus this is the angle pair reduced mod 2π.
    pub fn exp(xi: &AlgebraElement) -> Self {
        Self::new(xi.0)
    }

    pub fn theta(&self) -> [f64; 2] {
        self.theta
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement::new([self.theta[0] + other.theta[0], self.theta[1] + other.theta[1]])
    }

    /// Largest componentwise angular distance, measured on the circle.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        (0..2).map(|k| wrap_to_pi(self.theta[k] - other.theta[k]).abs()).fold(0.0, f64::max)
    }
}

/// Locked inertia tensor `𝕀 : t² → (t²)*`, a symmetric 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaTensor {
    m: Matrix2<f64>,
}

impl InertiaTensor {
    /// Wraps a symmetric matrix without checking regularity.
    pub fn from_entries(entries: [[f64; 2]; 2]) -> Self {
        Self { m: Matrix2::new(entries[0][0], entries[0][1], entries[1][0], entries[1][1]) }
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.m[(0, 0)], self.m[(0, 1)]], [self.m[(1, 0)], self.m[(1, 1)]]]
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    /// Whether `|det 𝕀| < REGULARITY_TOL · max(1, ‖𝕀‖²)`.
    pub fn is_singular(&self) -> bool {
        let scale = self.m.norm_squared().max(1.0);
        self.det().abs() < REGULARITY_TOL * scale
    }

    /// Returns `self` if regular, `SingularInertia` otherwise.
    pub fn checked(self) -> Result<Self> {
        if self.is_singular() || !self.det().is_finite() {
            Err(Error::SingularInertia { det: self.det() })
        } else {
            Ok(self)
        }
    }

    pub fn apply(&self, xi: &AlgebraElement) -> CoAlgebraElement {
        let v = self.m * Vector2::new(xi.0[0], xi.0[1]);
        CoAlgebraElement([v[0], v[1]])
    }

    /// `𝕀⁻¹ν`; call on a checked tensor.
    pub fn solve(&self, nu: &CoAlgebraElement) -> AlgebraElement {
        let [[a, b], [c, d]] = self.entries();
        let det = a * d - b * c;
        AlgebraElement([(d * nu.0[0] - b * nu.0[1]) / det, (a * nu.0[1] - c * nu.0[0]) / det])
    }
}

/// The torus action `g·q`.
pub fn act(g: &GroupElement, q: &PhasePoint) -> PhasePoint {
    let [t1, t2] = g.theta;
    let rot = |a: f64| C64::from_polar(1.0, -a);
    PhasePoint([q.0[0] * rot(t1), q.0[1] * rot(t1 + t2), q.0[2] * rot(t2)])
}

/// Pushforward of a tangent vector by the (linear) action of `g`.
pub fn act_vector(g: &GroupElement, v: &TangentVector) -> TangentVector {
    let p = act(g, &PhasePoint(v.0));
    TangentVector(p.0)
}

/// Infinitesimal generator `ξ_P(q) = (−iξ¹q₁, −i(ξ¹+ξ²)q₂, −iξ²q₃)`.
pub fn generator(xi: &AlgebraElement, q: &PhasePoint) -> TangentVector {
    let mi = -C64::i();
    let [a, b] = xi.0;
    TangentVector([mi * a * q.0[0], mi * (a + b) * q.0[1], mi * b * q.0[2]])
}

/// Momentum map `J(q) = (K₁, K₂)`.
pub fn momentum(k: &KahlerStructure, q: &PhasePoint) -> MomentumValue {
    let w = k.weights();
    let m = |j: usize| q.0[j].norm_sqr() / w[j];
    MomentumValue([0.5 * (m(0) + m(1)), 0.5 * (m(1) + m(2))])
}

/// The differentials `dK₁`, `dK₂` as one-forms.
pub fn momentum_covectors(k: &KahlerStructure, q: &PhasePoint) -> [Covector; 2] {
    let w = k.weights();
    let zero = C64::new(0.0, 0.0);
    [Covector([q.0[0] / w[0], q.0[1] / w[1], zero]), Covector([zero, q.0[1] / w[1], q.0[2] / w[2]])]
}

/// `forg(TJ(q)·w)`, the derivative of the momentum map along `w`.
pub fn momentum_differential(k: &KahlerStructure, q: &PhasePoint, w: &TangentVector) -> CoAlgebraElement {
    let [a, b] = momentum_covectors(k, q);
    CoAlgebraElement([geometry::pairing(&a, w), geometry::pairing(&b, w)])
}

fn inertia_unchecked(k: &KahlerStructure, q: &PhasePoint) -> InertiaTensor {
    let w = k.weights();
    let mu = momentum(k, q);
    let off = q.0[1].norm_sqr() / w[1];
    InertiaTensor::from_entries([[2.0 * mu.k1(), off], [off, 2.0 * mu.k2()]])
}

/// Locked inertia tensor from its closed form
/// `[[2K₁, |q₂|²/w₂], [|q₂|²/w₂, 2K₂]]`.
pub fn inertia(k: &KahlerStructure, q: &PhasePoint) -> Result<InertiaTensor> {
    inertia_unchecked(k, q).checked()
}

/// Locked inertia tensor from its defining bilinear form
/// `⟨𝕀ξ, η⟩ = 𝔰(ξ_P, η_P)`, evaluated on the basis of `t²`.
pub fn inertia_from_metric(k: &KahlerStructure, q: &PhasePoint) -> InertiaTensor {
    let e = [generator(&AlgebraElement::basis(0), q), generator(&AlgebraElement::basis(1), q)];
    let mut m = [[0.0; 2]; 2];
    for (a, ea) in e.iter().enumerate() {
        for (b, eb) in e.iter().enumerate() {
            m[a][b] = geometry::metric(k, ea, eb);
        }
    }
    InertiaTensor::from_entries(m)
}

/// Locked inertia tensor on the quotient, with off-diagonal entry
/// `(2w₃K₂ + Z₂)/(w₂ + w₃)`.
pub fn inertia_reduced(k: &KahlerStructure, y: &ReducedPoint) -> Result<InertiaTensor> {
    let w = k.weights();
    let [k1, k2] = y.mu.0;
    let off = (2.0 * w[2] * k2 + y.z2) / (w[1] + w[2]);
    InertiaTensor::from_entries([[2.0 * k1, off], [off, 2.0 * k2]]).checked()
}

/// Mechanical connection one-form `𝒜(q)·w` in its explicit three-wave form.
pub fn connection(k: &KahlerStructure, q: &PhasePoint, w: &TangentVector) -> Result<AlgebraElement> {
    let inertia = inertia(k, q)?;
    let wt = k.weights();
    let t = |j: usize| (q.0[j].conj() * w.0[j]).im / wt[j];
    let rhs = CoAlgebraElement([-(t(0) + t(1)), -(t(1) + t(2))]);
    Ok(inertia.solve(&rhs))
}

/// Connection one-form through the general almost-Kähler formula
/// `𝒜·w = 𝕀⁻¹·𝔰(ω♯(dJ), w)`, using only the geometry primitives.
pub fn connection_abstract(k: &KahlerStructure, q: &PhasePoint, w: &TangentVector) -> Result<AlgebraElement> {
    let inertia = inertia(k, q)?;
    let [a, b] = momentum_covectors(k, q);
    let rhs = CoAlgebraElement([
        geometry::metric(k, &geometry::omega_sharp(k, &a), w),
        geometry::metric(k, &geometry::omega_sharp(k, &b), w),
    ]);
    Ok(inertia.solve(&rhs))
}

/// Removes the vertical part of `w`: `w − (𝒜·w)_P`.
pub fn horizontal_project(k: &KahlerStructure, q: &PhasePoint, w: &TangentVector) -> Result<TangentVector> {
    let xi = connection(k, q, w)?;
    Ok(*w - generator(&xi, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{jmul, metric, omega, Sign};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn ones() -> PhasePoint {
        PhasePoint::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0))
    }

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn action_reference_values() {
        let q = ones();
        assert_eq!(act(&GroupElement::identity(), &q), q);
        let g = GroupElement::new([FRAC_PI_2, 0.0]);
        let p = act(&g, &q);
        let expected = [c(0.0, -1.0), c(0.0, -1.0), c(1.0, 0.0)];
        for (a, b) in p.0.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn action_group_law() {
        let q = PhasePoint::new(c(0.3, 1.0), c(-0.7, 0.2), c(1.1, -0.4));
        let g = GroupElement::new([1.2, -0.4]);
        let h = GroupElement::new([5.9, 2.2]);
        let lhs = act(&g, &act(&h, &q));
        let rhs = act(&g.compose(&h), &q);
        assert!(lhs.difference(&rhs).norm() < 1e-14);
    }

    #[test]
    fn group_element_normalises() {
        let g = GroupElement::new([-0.5, 7.0]);
        assert_close(g.theta()[0], 2.0 * PI - 0.5, 1e-15);
        assert_close(g.theta()[1], 7.0 - 2.0 * PI, 1e-15);
        assert_eq!(GroupElement::new([-1e-18, 0.0]).theta()[0], 0.0);
    }

    #[test]
    fn generator_reference_values() {
        let q = ones();
        assert_eq!(generator(&AlgebraElement([0.0, 0.0]), &q), TangentVector::zero());
        let v = generator(&AlgebraElement([1.0, 0.0]), &q);
        assert_eq!(v, TangentVector::new(c(0.0, -1.0), c(0.0, -1.0), c(0.0, 0.0)));
    }

    #[test]
    fn momentum_reference_values() {
        let k = KahlerStructure::unit();
        let zero = PhasePoint::zero();
        assert_eq!(momentum(&k, &zero).0, [0.0, 0.0]);
        let e1 = PhasePoint::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(momentum(&k, &e1).0, [0.5, 0.0]);
        assert_eq!(momentum(&k, &ones()).0, [1.0, 1.0]);
    }

    #[test]
    fn momentum_differential_reference_values() {
        let k = KahlerStructure::unit();
        let q = ones();
        assert_eq!(momentum_differential(&k, &q, &TangentVector::zero()).0, [0.0, 0.0]);
        let w = TangentVector::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
        assert_eq!(momentum_differential(&k, &q, &w).0, [2.0, 1.0]);
        let w = TangentVector::new(c(0.0, 1.0), c(0.0, 1.0), c(0.0, 1.0));
        assert_eq!(momentum_differential(&k, &q, &w).0, [0.0, 0.0]);
    }

    #[test]
    fn inertia_reference_values() {
        let k = KahlerStructure::unit();
        assert_eq!(inertia(&k, &ones()).unwrap().entries(), [[2.0, 1.0], [1.0, 2.0]]);
        assert_eq!(inertia_from_metric(&k, &ones()).entries(), [[2.0, 1.0], [1.0, 2.0]]);
        let q = PhasePoint::new(c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert_eq!(inertia(&k, &q).unwrap().entries(), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(inertia_from_metric(&k, &q).entries(), [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn inertia_singular_at_single_wave_states() {
        let k = KahlerStructure::unit();
        let q = PhasePoint::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(inertia(&k, &q), Err(Error::SingularInertia { .. })));
        assert!(inertia(&k, &PhasePoint::zero()).is_err());
    }

    #[test]
    fn inertia_reduced_reference_values() {
        let k = KahlerStructure::unit();
        let y = ReducedPoint::new(1.0, 0.0, 0.0, 0.0, MomentumValue([1.0, 1.0]));
        assert_eq!(inertia_reduced(&k, &y).unwrap().entries(), [[2.0, 1.0], [1.0, 2.0]]);
        let y0 = ReducedPoint::new(0.0, 0.0, 0.0, 0.0, MomentumValue([0.0, 0.0]));
        assert!(matches!(inertia_reduced(&k, &y0), Err(Error::SingularInertia { .. })));
    }

    #[test]
    fn connection_reference_values() {
        let k = KahlerStructure::unit();
        let q = ones();
        let gen = generator(&AlgebraElement([1.0, 0.0]), &q);
        let a = connection(&k, &q, &gen).unwrap();
        assert_close(a.0[0], 1.0, 1e-15);
        assert_close(a.0[1], 0.0, 1e-15);

        let w = TangentVector::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let a = connection(&k, &q, &w).unwrap();
        assert_eq!(a.0, [0.0, 0.0]);

        let w = TangentVector::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        let a = connection(&k, &q, &w).unwrap();
        assert_close(a.0[0], -2.0 / 3.0, 1e-15);
        assert_close(a.0[1], 1.0 / 3.0, 1e-15);
    }

    #[test]
    fn horizontal_projection_reference_values() {
        let k = KahlerStructure::unit();
        let q = ones();
        let w = TangentVector::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(horizontal_project(&k, &q, &w).unwrap(), w);

        let gen = generator(&AlgebraElement([0.3, -1.7]), &q);
        assert!(horizontal_project(&k, &q, &gen).unwrap().norm() < 1e-15);

        let w = TangentVector::new(c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0));
        let h = horizontal_project(&k, &q, &w).unwrap();
        let expected = TangentVector::new(c(0.0, 1.0 / 3.0), c(0.0, -1.0 / 3.0), c(0.0, 1.0 / 3.0));
        assert!((h - expected).norm() < 1e-15);
        for e in 0..2 {
            let g = generator(&AlgebraElement::basis(e), &q);
            assert!(metric(&k, &g, &h).abs() < 1e-15);
        }
        // idempotent
        let hh = horizontal_project(&k, &q, &h).unwrap();
        assert!((hh - h).norm() < 1e-15);
    }

    #[test]
    fn abstract_and_explicit_connection_agree() {
        let k = KahlerStructure::new([Sign::Plus, Sign::Minus, Sign::Plus], [0.8, 1.9, 1.1]).unwrap();
        let q = PhasePoint::new(c(0.3, 1.0), c(-0.7, 0.2), c(1.1, -0.4));
        let w = TangentVector::new(c(0.5, -0.1), c(0.2, 0.9), c(-1.3, 0.4));
        let a = connection(&k, &q, &w).unwrap();
        let b = connection_abstract(&k, &q, &w).unwrap();
        assert_close(a.0[0], b.0[0], 1e-13);
        assert_close(a.0[1], b.0[1], 1e-13);
    }

    #[test]
    fn orbits_are_isotropic() {
        let k = KahlerStructure::unit();
        let q = PhasePoint::new(c(0.3, 1.0), c(-0.7, 0.2), c(1.1, -0.4));
        let a = generator(&AlgebraElement([1.0, 0.0]), &q);
        let b = generator(&AlgebraElement([0.0, 1.0]), &q);
        assert!(omega(&k, &a, &b).abs() < 1e-15);
        // horizontal iff TJ(𝒥w) = 0
        let w = TangentVector::new(c(0.5, -0.1), c(0.2, 0.9), c(-1.3, 0.4));
        let h = horizontal_project(&k, &q, &w).unwrap();
        let d = momentum_differential(&k, &q, &jmul(&h));
        assert!(d.0[0].abs() < 1e-14 && d.0[1].abs() < 1e-14);
    }
}
