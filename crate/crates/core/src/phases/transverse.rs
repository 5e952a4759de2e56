//! Horizontal lifts of orbit-space tangents, the transverse distribution `D`
//! with its maps `N` and `L`, and the assembled two-form `ω′`.
//!
//! Orbit-space tangents are 4-vectors in `(X, Y, Z₁, Z₂)` coordinates.

use nalgebra::{Matrix6, Vector6};

use crate::dynamics::hamiltonian_differential;
use crate::error::{Error, Result};
use crate::geometry::{self, jmul, KahlerStructure, PhasePoint, TangentVector};
use crate::reduction::{projection_differential, reconstruct_point, ReducedPoint};
use crate::symmetry::{generator, inertia_reduced, momentum_differential, AlgebraElement, CoAlgebraElement};

/// Pivot threshold below which the lift system is treated as singular.
const LIFT_PIVOT_TOL: f64 = 1e-12;

/// Solver for horizontal lifts at a fixed fiber point.
///
/// For a quotient tangent `u` it returns the unique `w` with `Tπ(w) = u` and
/// `𝔰(ξ_P, w) = 0` for every `ξ`, which is the kernel of the connection.
#[derive(Debug, Clone)]
pub struct HorizontalLifter {
    kahler: KahlerStructure,
    point: PhasePoint,
    lu: nalgebra::LU<f64, nalgebra::U6, nalgebra::U6>,
}

impl HorizontalLifter {
    pub fn new(k: &KahlerStructure, x: &PhasePoint) -> Result<Self> {
        let mut a = Matrix6::<f64>::zeros();
        let orbit = [generator(&AlgebraElement::basis(0), x), generator(&AlgebraElement::basis(1), x)];
        for j in 0..6 {
            let mut e = [0.0; 6];
            e[j] = 1.0;
            let ej = TangentVector::from_real(&e);
            let d = projection_differential(x, &ej);
            for r in 0..4 {
                a[(r, j)] = d[r];
            }
            for (r, g) in orbit.iter().enumerate() {
                a[(4 + r, j)] = geometry::metric(k, g, &ej);
            }
        }
        let scale = a.amax().max(f64::MIN_POSITIVE);
        let lu = a.lu();
        let u = lu.u();
        let min_pivot = (0..6).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        if !(min_pivot > LIFT_PIVOT_TOL * scale) {
            return Err(Error::SingularInertia { det: lu.determinant() });
        }
        Ok(Self { kahler: *k, point: *x, lu })
    }

    /// Lifter at the section point over `y`.
    pub fn at_reduced(k: &KahlerStructure, y: &ReducedPoint) -> Result<Self> {
        Self::new(k, &reconstruct_point(k, y)?)
    }

    pub fn point(&self) -> &PhasePoint {
        &self.point
    }

    pub fn kahler(&self) -> &KahlerStructure {
        &self.kahler
    }

    pub fn lift(&self, u: &[f64; 4]) -> TangentVector {
        let rhs = Vector6::new(u[0], u[1], u[2], u[3], 0.0, 0.0);
        let w = self.lu.solve(&rhs).expect("lift system checked nonsingular");
        TangentVector::from_real(&[w[0], w[1], w[2], w[3], w[4], w[5]])
    }
}

/// Horizontal lift of the quotient tangent `u` at the fiber point `x`.
pub fn lift_quotient_tangent(k: &KahlerStructure, x: &PhasePoint, u: &[f64; 4]) -> Result<TangentVector> {
    Ok(HorizontalLifter::new(k, x)?.lift(u))
}

/// Spanning vectors of the transverse distribution at `y`, in closed form:
/// `v₁ = 2(X, Y, Z₁, |q₂|²)`, `v₂ = 2(X, Y, −|q₂|², Z₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseBasis {
    pub v1: [f64; 4],
    pub v2: [f64; 4],
}

impl TransverseBasis {
    pub fn at(k: &KahlerStructure, y: &ReducedPoint) -> Self {
        let w = k.weights();
        let m2 = (2.0 * w[2] * y.mu.k2() + y.z2) * w[1] / (w[1] + w[2]);
        Self { v1: [2.0 * y.x, 2.0 * y.y, 2.0 * y.z1, 2.0 * m2], v2: [2.0 * y.x, 2.0 * y.y, -2.0 * m2, 2.0 * y.z2] }
    }

    /// `ξ¹v₁ + ξ²v₂`.
    pub fn combine(&self, xi: &AlgebraElement) -> [f64; 4] {
        std::array::from_fn(|i| xi.0[0] * self.v1[i] + xi.0[1] * self.v2[i])
    }
}

/// `N(ξ) = Tπ(𝒥 ξ_P)` evaluated at the section point over `y`.
pub fn map_n(k: &KahlerStructure, y: &ReducedPoint, xi: &AlgebraElement) -> Result<[f64; 4]> {
    let x = reconstruct_point(k, y)?;
    Ok(projection_differential(&x, &jmul(&generator(xi, &x))))
}

/// `L(ν) = N(𝕀⁻¹ν)`.
pub fn map_l(k: &KahlerStructure, y: &ReducedPoint, nu: &CoAlgebraElement) -> Result<[f64; 4]> {
    let xi = inertia_reduced(k, y)?.solve(nu);
    map_n(k, y, &xi)
}

/// Derivative of the momentum value along the quotient tangent `u`.
pub fn quotient_momentum_differential(k: &KahlerStructure, y: &ReducedPoint, u: &[f64; 4]) -> Result<CoAlgebraElement> {
    let lifter = HorizontalLifter::at_reduced(k, y)?;
    Ok(momentum_differential(k, lifter.point(), &lifter.lift(u)))
}

/// The same transverse density evaluated three independent ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRoutes {
    /// `dh(L(ν))` with the reduced Hamiltonian `h = −X`.
    pub quotient: f64,
    /// `dH(𝒥(𝕀⁻¹ν)_P)` at the section point.
    pub fiber: f64,
    /// Closed form in the invariants.
    pub closed_form: f64,
}

impl DensityRoutes {
    pub fn spread(&self) -> f64 {
        let v = [self.quotient, self.fiber, self.closed_form];
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        hi - lo
    }
}

/// Dynamic-phase density `⟨ν, ξ_dyn⟩` from the closed form
/// `(2h/det 𝕀)(2K₁ν₂ + 2K₂ν₁ − 𝕀₁₂(ν₁ + ν₂))`.
pub fn dyn_phase_density(k: &KahlerStructure, y: &ReducedPoint, nu: &CoAlgebraElement) -> Result<f64> {
    let inertia = inertia_reduced(k, y)?;
    let [[_, c], _] = inertia.entries();
    let h = -y.x;
    let [k1, k2] = y.mu.0;
    let [n1, n2] = nu.0;
    Ok(2.0 * h / inertia.det() * (2.0 * k1 * n2 + 2.0 * k2 * n1 - c * (n1 + n2)))
}

pub fn dyn_phase_density_routes(k: &KahlerStructure, y: &ReducedPoint, nu: &CoAlgebraElement) -> Result<DensityRoutes> {
    let quotient = -map_l(k, y, nu)?[0];
    let x = reconstruct_point(k, y)?;
    let xi = inertia_reduced(k, y)?.solve(nu);
    let fiber = geometry::pairing(&hamiltonian_differential(&x), &jmul(&generator(&xi, &x)));
    Ok(DensityRoutes { quotient, fiber, closed_form: dyn_phase_density(k, y, nu)? })
}

/// Coefficient matrix `ω′_ij = ω(ẽ_i, ẽ_j)` of the assembled two-form.
pub fn omega_prime_matrix(k: &KahlerStructure, y: &ReducedPoint) -> Result<[[f64; 4]; 4]> {
    let lifter = HorizontalLifter::at_reduced(k, y)?;
    let lifts: [TangentVector; 4] = std::array::from_fn(|i| {
        let mut e = [0.0; 4];
        e[i] = 1.0;
        lifter.lift(&e)
    });
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let v = geometry::omega(k, &lifts[i], &lifts[j]);
            m[i][j] = v;
            m[j][i] = -v;
        }
    }
    Ok(m)
}

pub fn bilinear(m: &[[f64; 4]; 4], u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4).map(|i| (0..4).map(|j| u[i] * m[i][j] * v[j]).sum::<f64>()).sum()
}

/// `ω′(y)(u, v) = ω(ũ, ṽ)` for horizontal lifts `ũ`, `ṽ`.
pub fn assembled_form(k: &KahlerStructure, y: &ReducedPoint, u: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    let lifter = HorizontalLifter::at_reduced(k, y)?;
    Ok(geometry::omega(k, &lifter.lift(u), &lifter.lift(v)))
}

/// Induced metric `𝔰′(y)(u, v) = 𝔰(ũ, ṽ)` on the orbit space.
pub fn assembled_metric(k: &KahlerStructure, y: &ReducedPoint, u: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    let lifter = HorizontalLifter::at_reduced(k, y)?;
    Ok(geometry::metric(k, &lifter.lift(u), &lifter.lift(v)))
}
