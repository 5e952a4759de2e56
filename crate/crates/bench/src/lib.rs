//! Fixtures shared by the benchmarks.

use threewave_core::phases::PhaseConfig;
use threewave_core::reduction::{leaf_tangent, phi_gradient};
use threewave_core::{project, KahlerStructure, PhasePoint, ReducedPoint, TangentVector, C64};

pub fn kahler() -> KahlerStructure {
    KahlerStructure::unit()
}

pub fn point() -> PhasePoint {
    PhasePoint::new(C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.6, 0.2))
}

pub fn vector() -> TangentVector {
    TangentVector::new(C64::new(0.3, -0.1), C64::new(-0.2, 0.4), C64::new(0.1, 0.5))
}

pub fn reduced() -> ReducedPoint {
    project(&kahler(), &point())
}

/// Two independent tangents to the leaf through [`reduced`], in `(X, Y, Z₁, Z₂)`.
pub fn leaf_tangents() -> ([f64; 4], [f64; 4]) {
    let k = kahler();
    let n = phi_gradient(&k, &reduced().leaf());
    // (1, 0, 0) and (0, 1, 0) minus their normal components
    let nn = n.iter().map(|v| v * v).sum::<f64>();
    let t = |e: [f64; 3]| {
        let d = (0..3).map(|i| e[i] * n[i]).sum::<f64>() / nn;
        leaf_tangent(&k, std::array::from_fn(|i| e[i] - d * n[i]))
    };
    (t([1.0, 0.0, 0.0]), t([0.0, 1.0, 0.0]))
}

pub fn phase_config() -> PhaseConfig {
    PhaseConfig::default()
}
