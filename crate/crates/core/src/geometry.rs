//! Weighted flat Kähler structure on ℂ³.
//!
//! With weights `w_k = s_k γ_k` the structure is
//!
//! ```text
//! ω(z, w) = −Σ_k Im(z_k w̄_k) / w_k
//! 𝔰(z, w) =  Σ_k Re(z_k w̄_k) / w_k
//! 𝒥(z)    =  i z
//! ```
//!
//! and satisfies `ω(v, w) = 𝔰(𝒥v, w)`. The structure does not depend on the
//! base point, so tangent vectors and one-forms are plain complex 3-arrays.
//! One-forms act on vectors through the real pairing
//! `p(α, v) = Σ_k Re(α_k v̄_k)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Sign `s_k` of one wave's energy weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_value(v: f64) -> Option<Sign> {
        if v == 1.0 {
            Some(Sign::Plus)
        } else if v == -1.0 {
            Some(Sign::Minus)
        } else {
            None
        }
    }
}

/// The weights `s_k γ_k` defining ω, 𝔰 and 𝒥 on ℂ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahlerStructure {
    signs: [Sign; 3],
    gamma: [f64; 3],
}

impl KahlerStructure {
    pub fn new(signs: [Sign; 3], gamma: [f64; 3]) -> Result<Self> {
        for (k, g) in gamma.iter().enumerate() {
            if !g.is_finite() || *g <= 0.0 {
                return Err(Error::InvalidStructure(format!("gamma[{k}] = {g} must be finite and positive")));
            }
        }
        Ok(Self { signs, gamma })
    }

    /// Builds a structure from numeric signs, each of which must be exactly ±1.
    pub fn from_numeric(signs: [f64; 3], gamma: [f64; 3]) -> Result<Self> {
        let mut s = [Sign::Plus; 3];
        for k in 0..3 {
            s[k] = Sign::from_value(signs[k])
                .ok_or_else(|| Error::InvalidStructure(format!("s[{k}] = {} must be +1 or -1", signs[k])))?;
        }
        Self::new(s, gamma)
    }

    /// All signs positive, all γ equal to one.
    pub fn unit() -> Self {
        Self { signs: [Sign::Plus; 3], gamma: [1.0; 3] }
    }

    pub fn signs(&self) -> [Sign; 3] {
        self.signs
    }

    pub fn gamma(&self) -> [f64; 3] {
        self.gamma
    }

    /// `w_k = s_k γ_k`.
    pub fn weights(&self) -> [f64; 3] {
        [
            self.signs[0].value() * self.gamma[0],
            self.signs[1].value() * self.gamma[1],
            self.signs[2].value() * self.gamma[2],
        ]
    }

    /// True when every sign is positive, in which case the metric is
    /// positive definite and the momentum components are non-negative.
    pub fn is_definite(&self) -> bool {
        self.signs.iter().all(|s| *s == Sign::Plus)
    }
}

impl Default for KahlerStructure {
    fn default() -> Self {
        Self::unit()
    }
}

macro_rules! complex3 {
    ($name:ident) => {
        impl $name {
            pub fn new(a: C64, b: C64, c: C64) -> Self {
                Self([a, b, c])
            }

            pub fn zero() -> Self {
                Self([C64::new(0.0, 0.0); 3])
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            }

            /// Interleaved real coordinates `[re₁, im₁, re₂, im₂, re₃, im₃]`.
            pub fn to_real(&self) -> [f64; 6] {
                [self.0[0].re, self.0[0].im, self.0[1].re, self.0[1].im, self.0[2].re, self.0[2].im]
            }

            pub fn from_real(x: &[f64; 6]) -> Self {
                Self([C64::new(x[0], x[1]), C64::new(x[2], x[3]), C64::new(x[4], x[5])])
            }

            /// Euclidean norm of the underlying real 6-vector.
            pub fn norm(&self) -> f64 {
                self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = C64;
            fn index(&self, k: usize) -> &C64 {
                &self.0[k]
            }
        }
    };
}

/// A point `q ∈ ℂ³` of the unreduced phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint(pub [C64; 3]);

/// A tangent vector at some point of ℂ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector(pub [C64; 3]);

/// A real one-form on ℂ³, acting as `v ↦ Σ_k Re(α_k v̄_k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Covector(pub [C64; 3]);

complex3!(PhasePoint);
complex3!(TangentVector);
complex3!(Covector);

impl PhasePoint {
    /// Free points of the T² action: at least two amplitudes are nonzero.
    pub fn is_regular(&self) -> bool {
        self.0.iter().filter(|z| z.norm_sqr() > 0.0).count() >= 2
    }

    /// Moves the point along a tangent vector: `q + t·v`.
    pub fn displaced(&self, v: &TangentVector, t: f64) -> PhasePoint {
        PhasePoint([self.0[0] + v.0[0] * t, self.0[1] + v.0[1] * t, self.0[2] + v.0[2] * t])
    }

    /// Component-wise difference as a tangent vector.
    pub fn difference(&self, other: &PhasePoint) -> TangentVector {
        TangentVector([self.0[0] - other.0[0], self.0[1] - other.0[1], self.0[2] - other.0[2]])
    }
}

impl Add for TangentVector {
    type Output = TangentVector;
    fn add(self, rhs: TangentVector) -> TangentVector {
        TangentVector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Sub for TangentVector {
    type Output = TangentVector;
    fn sub(self, rhs: TangentVector) -> TangentVector {
        TangentVector([self.0[0] - rhs.0[0], self.0[1] - rhs.0[1], self.0[2] - rhs.0[2]])
    }
}

impl Neg for TangentVector {
    type Output = TangentVector;
    fn neg(self) -> TangentVector {
        TangentVector([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for TangentVector {
    type Output = TangentVector;
    fn mul(self, s: f64) -> TangentVector {
        TangentVector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Add for Covector {
    type Output = Covector;
    fn add(self, rhs: Covector) -> Covector {
        Covector([self.0[0] + rhs.0[0], self.0[1] + rhs.0[1], self.0[2] + rhs.0[2]])
    }
}

impl Mul<f64> for Covector {
    type Output = Covector;
    fn mul(self, s: f64) -> Covector {
        Covector([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

/// Symplectic pairing `ω(z, w)`.
pub fn omega(k: &KahlerStructure, z: &TangentVector, w: &TangentVector) -> f64 {
    let wt = k.weights();
    -(0..3).map(|j| (z.0[j] * w.0[j].conj()).im / wt[j]).sum::<f64>()
}

/// Weighted metric `𝔰(z, w)`.
pub fn metric(k: &KahlerStructure, z: &TangentVector, w: &TangentVector) -> f64 {
    let wt = k.weights();
    (0..3).map(|j| (z.0[j] * w.0[j].conj()).re / wt[j]).sum()
}

/// The complex structure `𝒥v = i v`.
pub fn jmul(v: &TangentVector) -> TangentVector {
    let i = C64::i();
    TangentVector([i * v.0[0], i * v.0[1], i * v.0[2]])
}

/// Real pairing of a one-form with a vector.
pub fn pairing(alpha: &Covector, v: &TangentVector) -> f64 {
    (0..3).map(|j| (alpha.0[j] * v.0[j].conj()).re).sum()
}

/// Inverse of the flat map `v ↦ ω(v, ·)`.
///
/// Fixed so that `ω(ω♯α, w) = p(α, w)`. With this convention `ω♯(dH)` is the
/// Hamiltonian vector field `q̇_k = −2i s_k γ_k ∂H/∂q̄_k`, and `ω♯(dJ_ξ)` is
/// the infinitesimal generator `ξ_P`.
pub fn omega_sharp(k: &KahlerStructure, alpha: &Covector) -> TangentVector {
    let wt = k.weights();
    let mi = -C64::i();
    TangentVector([mi * wt[0] * alpha.0[0], mi * wt[1] * alpha.0[1], mi * wt[2] * alpha.0[2]])
}

/// The flat map `v ↦ ω(v, ·)`.
pub fn omega_flat(k: &KahlerStructure, v: &TangentVector) -> Covector {
    let wt = k.weights();
    let i = C64::i();
    Covector([i * v.0[0] / wt[0], i * v.0[1] / wt[1], i * v.0[2] / wt[2]])
}

/// Metric sharp: the vector `u` with `𝔰(u, w) = p(α, w)` for all `w`.
pub fn metric_sharp(k: &KahlerStructure, alpha: &Covector) -> TangentVector {
    let wt = k.weights();
    TangentVector([alpha.0[0] * wt[0], alpha.0[1] * wt[1], alpha.0[2] * wt[2]])
}
