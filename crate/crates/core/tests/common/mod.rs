#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use threewave_core::{KahlerStructure, PhasePoint, TangentVector, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn default_q0() -> PhasePoint {
    PhasePoint::new(C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.6, 0.2))
}

pub fn polar(r: f64, a: f64) -> C64 {
    C64::from_polar(r, a)
}

/// Positive-definite structure with weights in [0.5, 2].
pub fn random_kahler(rng: &mut impl Rng) -> KahlerStructure {
    let g = [(); 3].map(|_| rng.random_range(0.5..2.0));
    KahlerStructure::from_numeric([1.0; 3], g).unwrap()
}

/// Any signs, weights in [0.5, 2].
pub fn random_signed_kahler(rng: &mut impl Rng) -> KahlerStructure {
    let s = [(); 3].map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 });
    let g = [(); 3].map(|_| rng.random_range(0.5..2.0));
    KahlerStructure::from_numeric(s, g).unwrap()
}

/// Point with every amplitude in [0.3, 1.5], hence regular.
pub fn random_regular(rng: &mut impl Rng) -> PhasePoint {
    let mut c = || polar(rng.random_range(0.3..1.5), rng.random_range(-3.2..3.2));
    PhasePoint::new(c(), c(), c())
}

pub fn random_vector(rng: &mut impl Rng) -> TangentVector {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    TangentVector::new(c(), c(), c())
}

/// Orthonormal basis of the tangent plane of a leaf at a point with normal `n`.
pub fn tangent_plane(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    use threewave_core::reduction::{cross, dot3};
    let len = dot3(n, n).sqrt();
    let nh = n.map(|v| v / len);
    let pick = if nh[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = dot3(pick, nh);
    let mut e1 = [pick[0] - d * nh[0], pick[1] - d * nh[1], pick[2] - d * nh[2]];
    let m = dot3(e1, e1).sqrt();
    e1 = e1.map(|v| v / m);
    (e1, cross(nh, e1))
}
