//! The forward light cone p·p = 0, p⁰ > 0.
//!
//! Points are parametrized by (r, θ, ϑ) with
//! p⁰ = r, p¹ = r sinθ sinϑ, p² = r sinθ cosϑ, p³ = r cosθ.
//! Note the azimuth is measured from the p² axis towards p¹. At the poles
//! θ ∈ {0, π} the azimuth is set to 0.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::sl2c::{lorentz_of, pauli_embed, FourVector, LorentzMatrix, SL2Element, STANDARD_MOMENTUM};
use crate::{Error, Result, C64};

/// Relative tolerance for accepting a four-vector as lying on the cone.
pub const ON_CONE_TOL: f64 = 1e-12;

/// A point of the forward light cone, stored through its spatial momentum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct ConePoint {
    spatial: [f64; 3],
    r: f64,
}

impl TryFrom<[f64; 3]> for ConePoint {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        ConePoint::from_spatial(v)
    }
}

impl From<ConePoint> for [f64; 3] {
    fn from(p: ConePoint) -> [f64; 3] {
        p.spatial
    }
}

impl ConePoint {
    /// The point with spatial momentum p⃗ and p⁰ = |p⃗|.
    pub fn from_spatial(p: [f64; 3]) -> Result<Self> {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::NonPositiveRadius(r));
        }
        Ok(ConePoint { spatial: p, r })
    }

    pub fn from_spherical(r: f64, polar: f64, azimuth: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::NonPositiveRadius(r));
        }
        let (st, ct) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Ok(ConePoint {
            spatial: [r * st * sa, r * st * ca, r * ct],
            r,
        })
    }

    /// Accepts (p⁰, p⃗) when |p·p| ≤ 1e-12·(p⁰)² and p⁰ > 0.
    pub fn from_four_vector(p: &FourVector) -> Result<Self> {
        if !(p[0] > 0.0) {
            return Err(Error::NonPositiveRadius(p[0]));
        }
        let square = p.minkowski(p);
        if square.abs() > ON_CONE_TOL * p[0] * p[0] {
            return Err(Error::NotOnCone(format!("p·p = {square:e} for p = {:?}", p.0)));
        }
        ConePoint::from_spatial(p.spatial())
    }

    /// The standard point p̄ = (1, 0, 0, 1).
    pub fn standard() -> Self {
        ConePoint {
            spatial: [0.0, 0.0, 1.0],
            r: 1.0,
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn spatial(&self) -> [f64; 3] {
        self.spatial
    }

    pub fn four_vector(&self) -> FourVector {
        let [a, b, c] = self.spatial;
        FourVector::new(self.r, a, b, c)
    }

    /// √((p¹)² + (p²)²), the distance from the p³ axis.
    pub fn transverse_norm(&self) -> f64 {
        self.spatial[0].hypot(self.spatial[1])
    }

    /// θ ∈ [0, π].
    pub fn polar(&self) -> f64 {
        self.transverse_norm().atan2(self.spatial[2])
    }

    /// ϑ ∈ [0, 2π), measured from the p² axis towards p¹; 0 on the p³ axis.
    pub fn azimuth(&self) -> f64 {
        if self.transverse_norm() == 0.0 {
            return 0.0;
        }
        let a = self.spatial[0].atan2(self.spatial[1]);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    /// True when the point lies within a relative distance `eps` of the p³ axis.
    pub fn is_pole(&self, eps: f64) -> bool {
        self.transverse_norm() <= eps * self.r
    }

    /// Unit spatial direction n = p⃗/r.
    pub fn direction(&self) -> [f64; 3] {
        let [a, b, c] = self.spatial;
        [a / self.r, b / self.r, c / self.r]
    }

    /// Image of the point under a Lorentz matrix, with p⁰ reset to |p⃗|.
    pub fn transformed(&self, m: &LorentzMatrix) -> Result<ConePoint> {
        let q = m.apply(&self.four_vector());
        ConePoint::from_spatial(q.spatial())
    }
}

/// The boost section β(p), an SL(2,ℂ) element with β(p)⁻¹ p̄̂ (β(p)⁻¹)* = p̂.
///
/// With c = cos(θ/2), s = sin(θ/2):
/// β(p) = [[r^{-1/2} c e^{−iϑ/2}, −i r^{-1/2} s e^{iϑ/2}],
///         [−i r^{1/2} s e^{−iϑ/2}, r^{1/2} c e^{iϑ/2}]].
/// Finite everywhere on the cone, including the poles.
pub fn section(p: &ConePoint) -> SL2Element {
    let r = p.r();
    let cos_polar = (p.spatial[2] / r).clamp(-1.0, 1.0);
    let c = ((1.0 + cos_polar) / 2.0).sqrt();
    let s = ((1.0 - cos_polar) / 2.0).sqrt();
    let half = C64::from_polar(1.0, p.azimuth() / 2.0);
    let (lo, hi) = (r.sqrt().recip(), r.sqrt());
    let mi = C64::new(0.0, -1.0);
    SL2Element::from_matrix_unchecked(Matrix2::new(
        half.conj() * (lo * c),
        mi * half * (lo * s),
        mi * half.conj() * (hi * s),
        half * (hi * c),
    ))
}

/// ‖β(p)⁻¹ p̄̂ (β(p)⁻¹)* − p̂‖∞.
pub fn section_residual(p: &ConePoint) -> f64 {
    let b_inv = section(p).inverse();
    let moved = b_inv.matrix() * pauli_embed(&STANDARD_MOMENTUM) * b_inv.adjoint();
    crate::max_abs_c(&(moved - pauli_embed(&p.four_vector())))
}

/// V(β(p)), the Lorentz matrix of the section. It maps p to p̄.
pub fn section_lorentz(p: &ConePoint) -> LorentzMatrix {
    lorentz_of(&section(p))
}

/// Λ(α)p := V(α)⁻¹p. With this convention α ↦ (φ ↦ V(α)φ∘Λ(α)) is a homomorphism.
pub fn boost_action(alpha: &SL2Element, p: &ConePoint) -> Result<ConePoint> {
    p.transformed(&lorentz_of(alpha).inverse())
}

/// γ(α,p) = β(p) α β(Λ(α)p)⁻¹, an element of the little group of p̄.
pub fn wigner_element(alpha: &SL2Element, p: &ConePoint) -> Result<SL2Element> {
    let q = boost_action(alpha, p)?;
    Ok(wigner_element_at(alpha, p, &q))
}

/// γ(α,p) when the image q = Λ(α)p is already known.
pub fn wigner_element_at(alpha: &SL2Element, p: &ConePoint, q: &ConePoint) -> SL2Element {
    section(p) * *alpha * section(q).inverse()
}

/// Reads (z, φ) off a little-group element [[e^{iφ/2}, e^{iφ/2}z], [0, e^{−iφ/2}]].
/// φ is returned in (−2π, 2π].
pub fn little_group_parameters(gamma: &SL2Element) -> (C64, f64) {
    let m = gamma.matrix();
    let phi = 2.0 * m[(0, 0)].arg();
    (m[(0, 1)] / m[(0, 0)], phi)
}

/// Density of dμ = d³p/(2|p⃗|) with respect to d³p.
pub fn invariant_measure_weight(p: &ConePoint) -> f64 {
    0.5 / p.r()
}
