//! The exterior covariant derivative of `ω′` and the geometric phase as a
//! surface integral over a cap of the three-wave surface.
//!
//! Sign: for a loop bounding `Σ` with the induced boundary orientation, the
//! holonomy is `+∫_Σ D_μω′`. This was fixed against small-loop holonomy.

use crate::dynamics::ReducedTrajectory;
use crate::error::{Error, Result};
use crate::geometry::KahlerStructure;
use crate::reduction::{leaf_tangent, reconstruct_point, surface_profile, LeafPoint, ReducedPoint};
use crate::symmetry::{CoAlgebraElement, MomentumValue};

use super::transverse::{bilinear, map_l, omega_prime_matrix};

/// Relative central-difference step for derivatives of `ω′`.
pub const FD_STEP: f64 = 1e-5;

type Matrix4 = [[f64; 4]; 4];

fn omega_prime_at(k: &KahlerStructure, c: [f64; 4]) -> Result<Matrix4> {
    omega_prime_matrix(k, &ReducedPoint::from_invariants(k, c)?)
}

/// Partial derivatives `∂_m ω′_ij` at `c` by central differences.
pub fn omega_prime_derivative(k: &KahlerStructure, c: [f64; 4], step: f64) -> Result<[Matrix4; 4]> {
    let mut out = [[[0.0; 4]; 4]; 4];
    for (m, slot) in out.iter_mut().enumerate() {
        let h = step * c[m].abs().max(1.0);
        let (mut p, mut q) = (c, c);
        p[m] += h;
        q[m] -= h;
        let (a, b) = (omega_prime_at(k, p)?, omega_prime_at(k, q)?);
        for i in 0..4 {
            for j in 0..4 {
                slot[i][j] = (a[i][j] - b[i][j]) / (2.0 * h);
            }
        }
    }
    Ok(out)
}

fn directional(d: &[Matrix4; 4], a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> f64 {
    (0..4).map(|m| a[m] * bilinear(&d[m], b, c)).sum()
}

/// `dσ(a, b, c)` for a two-form with coefficient derivatives `d`.
pub fn exterior_derivative(d: &[Matrix4; 4], a: &[f64; 4], b: &[f64; 4], c: &[f64; 4]) -> f64 {
    directional(d, a, b, c) - directional(d, b, a, c) + directional(d, c, a, b)
}

/// Both components of the curvature two-form, `(dω′(L(e¹), u, v), dω′(L(e²), u, v))`,
/// at an arbitrary orbit-space point `y`.
pub fn curvature_components(
    k: &KahlerStructure,
    y: &ReducedPoint,
    u: &[f64; 4],
    v: &[f64; 4],
    step: f64,
) -> Result<[f64; 2]> {
    let d = omega_prime_derivative(k, y.coords(), step)?;
    let mut out = [0.0; 2];
    for (a, slot) in out.iter_mut().enumerate() {
        let l = map_l(k, y, &CoAlgebraElement::basis(a))?;
        *slot = exterior_derivative(&d, &l, u, v);
    }
    Ok(out)
}

/// `⟨ν, D_μω′(v₁, v₂)⟩ = dω′(L(ν), v₁, v₂)` for leaf tangents `v₁, v₂` in
/// `(X, Y, Z₂)` coordinates.
pub fn exterior_covariant_derivative_omega(
    k: &KahlerStructure,
    y: &LeafPoint,
    v1: [f64; 3],
    v2: [f64; 3],
    nu: &CoAlgebraElement,
) -> Result<f64> {
    exterior_covariant_derivative_omega_with_step(k, y, v1, v2, nu, FD_STEP)
}

pub fn exterior_covariant_derivative_omega_with_step(
    k: &KahlerStructure,
    y: &LeafPoint,
    v1: [f64; 3],
    v2: [f64; 3],
    nu: &CoAlgebraElement,
    step: f64,
) -> Result<f64> {
    if nu.0 == [0.0, 0.0] {
        return Ok(0.0);
    }
    let y4 = y.to_reduced(k);
    let d = omega_prime_derivative(k, y4.coords(), step)?;
    let l = map_l(k, &y4, nu)?;
    Ok(exterior_derivative(&d, &l, &leaf_tangent(k, v1), &leaf_tangent(k, v2)))
}

/// Cap triangulation resolution: `6·2^level` rings and `24·2^level` sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeshConfig {
    pub level: u32,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { level: 1 }
    }
}

impl MeshConfig {
    pub fn rings(&self) -> usize {
        6usize << self.level
    }

    pub fn sectors(&self) -> usize {
        24usize << self.level
    }
}

/// Triangulated cap `{X ≥ X₀}` of a three-wave surface, in `(X, Y, Z₂)`.
///
/// Triangles are ordered so that the boundary ring runs along the reduced
/// flow.
#[derive(Debug, Clone, PartialEq)]
pub struct CapMesh {
    pub mu: MomentumValue,
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

impl CapMesh {
    pub fn max_phi(&self, k: &KahlerStructure) -> f64 {
        self.vertices
            .iter()
            .map(|v| crate::reduction::phi(k, &LeafPoint::new(v[0], v[1], v[2], self.mu)).abs())
            .fold(0.0, f64::max)
    }
}

// Local maximum of the profile F(Z₂) together with the other critical point.
fn profile_critical_points(k: &KahlerStructure, mu: &MomentumValue) -> Result<(f64, Option<f64>)> {
    // F'(z) is quadratic; recover its coefficients from three samples
    let fp = |z: f64| surface_profile(k, mu, z).1;
    let (f0, f1, fm) = (fp(0.0), fp(1.0), fp(-1.0));
    let a = 0.5 * (f1 + fm) - f0;
    let b = 0.5 * (f1 - fm);
    let c = f0;
    let disc = b * b - 4.0 * a * c;
    if a == 0.0 || disc <= 0.0 {
        return Err(Error::MeshFailure("surface profile has no local maximum".into()));
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    let (r1, r2) = (q / a, c / q);
    // F'' = 2az + b < 0 at the maximum
    if 2.0 * a * r1 + b < 0.0 {
        Ok((r1, Some(r2)))
    } else {
        Ok((r2, Some(r1)))
    }
}

fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    // g(lo) ≥ 0 > g(hi)
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        if g(m) >= 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

struct Profile<'a> {
    k: &'a KahlerStructure,
    mu: MomentumValue,
    zmax: f64,
    other: Option<f64>,
}

impl Profile<'_> {
    fn f(&self, z: f64) -> f64 {
        surface_profile(self.k, &self.mu, z).0
    }

    // Z₂ where F(Z₂) = c² on the side `dir` of the maximum.
    fn root(&self, c2: f64, dir: f64) -> Result<f64> {
        let g = |z: f64| self.f(z) - c2;
        let limit = self.other.filter(|o| (o - self.zmax) * dir > 0.0);
        let far = match limit {
            Some(o) => {
                if g(o) >= 0.0 {
                    return Err(Error::MeshFailure("level set is not a single oval".into()));
                }
                o
            }
            None => {
                let mut step = self.zmax.abs().max(1.0);
                let mut z = self.zmax + dir * step;
                let mut n = 0;
                while g(z) >= 0.0 {
                    step *= 2.0;
                    z = self.zmax + dir * step;
                    n += 1;
                    if n > 200 {
                        return Err(Error::MeshFailure("profile does not decrease".into()));
                    }
                }
                z
            }
        };
        Ok(bisect(self.zmax, far, g))
    }
}

fn top(k: &KahlerStructure, mu: &MomentumValue) -> Result<(f64, f64, Option<f64>)> {
    let (zmax, other) = profile_critical_points(k, mu)?;
    let fmax = surface_profile(k, mu, zmax).0;
    if !(fmax > 0.0) {
        return Err(Error::MeshFailure("surface profile is not positive at its maximum".into()));
    }
    Ok((fmax.sqrt(), zmax, other))
}

/// Largest `X` on the surface of `mu`, attained at `Y = 0`.
pub fn surface_top(k: &KahlerStructure, mu: &MomentumValue) -> Result<f64> {
    top(k, mu).map(|t| t.0)
}

/// Triangulates `{X ≥ x0}` on the leaf of `mu` by level bands in `X`.
///
/// Levels are `c = X_max − (X_max − x0)ρ²` so that rings are evenly spaced
/// near the pole; each ring is the oval `Y² = F(Z₂) − c²` sampled as
/// `Z₂ = m + r cos ψ`.
pub fn cap_mesh(k: &KahlerStructure, mu: &MomentumValue, x0: f64, cfg: &MeshConfig) -> Result<CapMesh> {
    let (xmax, zmax, other) = top(k, mu)?;
    let prof = Profile { k, mu: *mu, zmax, other };
    if x0 > xmax * (1.0 + 1e-12) + 1e-300 {
        return Err(Error::MeshFailure(format!("X0 = {x0} lies above the surface top {xmax}")));
    }
    let pole = [xmax, 0.0, zmax];
    match reconstruct_point(k, &LeafPoint::new(pole[0], pole[1], pole[2], *mu).to_reduced(k)) {
        Ok(_) | Err(Error::GaugeUndefined) => {}
        Err(e) => return Err(Error::MeshFailure(format!("leaf is not realised by any phase point: {e}"))),
    }
    if xmax - x0 <= 1e-12 * xmax.max(1.0) {
        return Ok(CapMesh { mu: *mu, vertices: vec![pole], triangles: Vec::new() });
    }
    let w = k.weights();
    let flip = (w[1] + w[2]) < 0.0;

    let (nr, ns) = (cfg.rings(), cfg.sectors());
    let mut vertices = vec![pole];
    for i in 1..=nr {
        let rho = i as f64 / nr as f64;
        let c = if i == nr { x0 } else { xmax - (xmax - x0) * rho * rho };
        let zl = prof.root(c * c, -1.0)?;
        let zr = prof.root(c * c, 1.0)?;
        let (m, r) = (0.5 * (zl + zr), 0.5 * (zr - zl));
        for j in 0..ns {
            let psi = std::f64::consts::TAU * j as f64 / ns as f64;
            let z2 = m + r * psi.cos();
            let s = psi.sin();
            let y = if j == 0 || 2 * j == ns { 0.0 } else { s.signum() * (prof.f(z2) - c * c).max(0.0).sqrt() };
            vertices.push([c, y, z2]);
        }
    }
    let idx = |ring: usize, j: usize| 1 + (ring - 1) * ns + (j % ns);
    let mut triangles = Vec::with_capacity(ns * (2 * nr - 1));
    let mut push = |t: [usize; 3]| triangles.push(if flip { [t[0], t[2], t[1]] } else { t });
    for j in 0..ns {
        push([0, idx(1, j), idx(1, j + 1)]);
    }
    for i in 1..nr {
        for j in 0..ns {
            push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    for v in &vertices {
        if !v.iter().all(|x| x.is_finite()) {
            return Err(Error::MeshFailure("non-finite vertex".into()));
        }
    }
    Ok(CapMesh { mu: *mu, vertices, triangles })
}

fn to_orbit_space(k: &KahlerStructure, mu: &MomentumValue, p: [f64; 3]) -> Result<ReducedPoint> {
    let leaf = LeafPoint::new(p[0], p[1], p[2], *mu).to_reduced(k);
    ReducedPoint::from_invariants(k, leaf.coords())
}

/// `∫_Σ D_μω′` over a triangulated cap, by the edge-midpoint rule on each
/// flat triangle.
pub fn integrate_curvature(k: &KahlerStructure, mesh: &CapMesh) -> Result<[f64; 2]> {
    let mut acc = [0.0; 2];
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| mesh.vertices[i]);
        let e1 = leaf_tangent(k, std::array::from_fn(|i| b[i] - a[i]));
        let e2 = leaf_tangent(k, std::array::from_fn(|i| c[i] - a[i]));
        for (p, q) in [(a, b), (b, c), (c, a)] {
            let mid: [f64; 3] = std::array::from_fn(|i| 0.5 * (p[i] + q[i]));
            let y = to_orbit_space(k, &mesh.mu, mid)?;
            let v = curvature_components(k, &y, &e1, &e2, FD_STEP)?;
            // area factor 1/2 times midpoint weight 1/3
            acc[0] += v[0] / 6.0;
            acc[1] += v[1] / 6.0;
        }
    }
    if !acc.iter().all(|v| v.is_finite()) {
        return Err(Error::MeshFailure("non-finite curvature integral".into()));
    }
    Ok(acc)
}

/// Geometric phase of a closed reduced orbit as the curvature integral over
/// the cap `{X ≥ X₀}` it bounds.
pub fn geometric_phase_surface(lp: &ReducedTrajectory, cfg: &MeshConfig) -> Result<[f64; 2]> {
    let k = lp.kahler();
    let mesh = cap_mesh(k, &lp.mu(), lp.initial().x, cfg)?;
    integrate_curvature(k, &mesh)
}
