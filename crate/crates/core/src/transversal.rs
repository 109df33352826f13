//! The transversal subspace and the unitary helicity representation it carries.
//!
//! Every wave decomposes pointwise in the orthonormal frame,
//! φ = w₁⁺f₊ + w₁⁻f₋ + w_{r⁻²}f₀₊ + w_{r²}f₀₋, and the transversal states are
//! those with f₀₊ = f₀₋ = 0. On them the Krein product is positive and equals
//! the plain L²(dμ) product of (f₊, f₋).
//!
//! A group element moves a transversal state out of the subspace only by a
//! Krein-null vector u along p:
//!
//! ```text
//! V(α)w₁⁺(Λ(α)p) = Θ⁺₊ w₁⁺(p) + Θ⁺₋ w₁⁻(p) + u⁺
//! V(α)w₁⁻(Λ(α)p) = Θ⁻₊ w₁⁺(p) + Θ⁻₋ w₁⁻(p) + u⁻
//! ```
//!
//! with Θ⁺₊ = Θ⁻₋ = cos Θ(α,p) and Θ⁻₊ = −Θ⁺₋ = sin Θ(α,p).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;

use crate::cone::ConePoint;
use crate::krein::{fiber_symmetry, krein_pair, Frame, FrameLabel};
use crate::rep::{Envelope, GroupElement, Wave};
use crate::sl2c::{lorentz_of, LorentzMatrix, SL2Element};
use crate::{Result, C4, C64};

/// Coefficients of a vector in the frame at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameCoefficients {
    pub plus: C64,
    pub minus: C64,
    pub forward: C64,
    pub backward: C64,
}

impl FrameCoefficients {
    pub fn from_array(c: [C64; 4]) -> Self {
        FrameCoefficients {
            plus: c[0],
            minus: c[1],
            forward: c[2],
            backward: c[3],
        }
    }

    pub fn to_array(&self) -> [C64; 4] {
        [self.plus, self.minus, self.forward, self.backward]
    }
}

/// Frame coefficients ⟨w_λ(p), φ(p)⟩ of a wave at p.
pub fn decompose(phi: &Wave, p: &ConePoint) -> Result<FrameCoefficients> {
    let frame = Frame::at(p)?;
    Ok(FrameCoefficients::from_array(frame.coefficients(&phi.eval(p)?)))
}

/// P(p) = w₁⁺w₁⁺ᵀ + w₁⁻w₁⁻ᵀ, the pointwise projector onto the transversal plane.
pub fn projector(p: &ConePoint) -> Result<Matrix4<f64>> {
    let f = Frame::at(p)?;
    Ok(f.transverse_plus * f.transverse_plus.transpose() + f.transverse_minus * f.transverse_minus.transpose())
}

/// ‖P² − P‖∞ and ‖J′ₚ Pᵀ J′ₚ − P‖∞ at p.
pub fn projector_residuals(p: &ConePoint) -> Result<(f64, f64)> {
    let pr = projector(p)?;
    let jp = fiber_symmetry(p);
    let scale = p.r().powi(2).max(p.r().powi(-2));
    Ok((
        crate::max_abs(&(pr * pr - pr)),
        crate::max_abs(&(jp * pr.transpose() * jp - pr)) / scale,
    ))
}

type PairFn = dyn Fn(&ConePoint) -> Result<[C64; 2]> + Send + Sync;

/// A transversal state, given by its pair of scalar functions (f₊, f₋).
#[derive(Clone)]
pub struct TransversalState {
    f: Arc<PairFn>,
    support: Option<Vec<[f64; 3]>>,
}

impl fmt::Debug for TransversalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransversalState")
            .field("localized", &self.support.is_some())
            .finish()
    }
}

impl TransversalState {
    pub fn new<F>(f: F, support: Option<Vec<[f64; 3]>>) -> Self
    where
        F: Fn(&ConePoint) -> Result<[C64; 2]> + Send + Sync + 'static,
    {
        TransversalState {
            f: Arc::new(f),
            support,
        }
    }

    pub fn from_envelopes(plus: Envelope, minus: Envelope) -> Self {
        let support = match (plus.support(), minus.support()) {
            (Some(mut a), Some(b)) => {
                a.extend(b);
                Some(a)
            }
            _ => None,
        };
        Self::new(move |p| Ok([plus.eval(p), minus.eval(p)]), support)
    }

    pub fn eval(&self, p: &ConePoint) -> Result<[C64; 2]> {
        (self.f)(p)
    }

    pub fn support(&self) -> Option<Vec<[f64; 3]>> {
        self.support.clone()
    }

    /// w₁⁺f₊ + w₁⁻f₋ as a wave.
    pub fn embed(&self) -> Wave {
        let s = self.clone();
        Wave::custom(
            move |p| {
                let [a, b] = s.eval(p)?;
                let f = Frame::at(p)?;
                Ok(f.get_c(FrameLabel::TransversePlus) * a + f.get_c(FrameLabel::TransverseMinus) * b)
            },
            self.support(),
        )
    }
}

/// (f₊, f₋) of a wave: the coefficients on w₁⁺ and w₁⁻.
pub fn project_tr(phi: &Wave) -> TransversalState {
    let phi = phi.clone();
    let support = phi.support();
    TransversalState::new(
        move |p| {
            let c = decompose(&phi, p)?;
            Ok([c.plus, c.minus])
        },
        support,
    )
}

/// The four transversal matrix elements of V(α) between the frames at Λ(α)p and p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaMatrix {
    /// Θ⁺₊ = ⟨w₁⁺(p), J V(α) w₁⁺(Λp)⟩
    pub plus_plus: f64,
    /// Θ⁺₋ = ⟨w₁⁻(p), J V(α) w₁⁺(Λp)⟩
    pub plus_minus: f64,
    /// Θ⁻₊ = ⟨w₁⁺(p), J V(α) w₁⁻(Λp)⟩
    pub minus_plus: f64,
    /// Θ⁻₋ = ⟨w₁⁻(p), J V(α) w₁⁻(Λp)⟩
    pub minus_minus: f64,
}

impl ThetaMatrix {
    pub fn phase(&self) -> PhasePair {
        PhasePair {
            cos: self.plus_plus,
            sin: self.minus_plus,
        }
    }

    /// max of |Θ⁺₊ − Θ⁻₋|, |Θ⁺₋ + Θ⁻₊| and |cos² + sin² − 1|.
    pub fn identity_residual(&self) -> f64 {
        (self.plus_plus - self.minus_minus)
            .abs()
            .max((self.plus_minus + self.minus_plus).abs())
            .max((self.plus_plus.powi(2) + self.minus_plus.powi(2) - 1.0).abs())
    }

    pub fn max_difference(&self, other: &ThetaMatrix) -> f64 {
        (self.plus_plus - other.plus_plus)
            .abs()
            .max((self.plus_minus - other.plus_minus).abs())
            .max((self.minus_plus - other.minus_plus).abs())
            .max((self.minus_minus - other.minus_minus).abs())
    }
}

/// Θ(α,p) as the pair (cos Θ, sin Θ); never unwrapped to an angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePair {
    pub cos: f64,
    pub sin: f64,
}

impl PhasePair {
    pub fn from_angle(theta: f64) -> Self {
        let (sin, cos) = theta.sin_cos();
        PhasePair { cos, sin }
    }

    /// e^{iΘ}.
    pub fn unit(&self) -> C64 {
        C64::new(self.cos, self.sin)
    }

    /// The phase of Θ₁ + Θ₂.
    pub fn add(&self, other: &PhasePair) -> PhasePair {
        PhasePair {
            cos: self.cos * other.cos - self.sin * other.sin,
            sin: self.sin * other.cos + self.cos * other.sin,
        }
    }

    /// [[cos, sin], [−sin, cos]], the action on (f₊, f₋).
    pub fn rotation(&self) -> Matrix2<f64> {
        Matrix2::new(self.cos, self.sin, -self.sin, self.cos)
    }

    pub fn distance(&self, other: &PhasePair) -> f64 {
        (self.cos - other.cos).abs().max((self.sin - other.sin).abs())
    }
}

fn transverse_block(v_of: impl Fn(&C4) -> C4, fp: &Frame, fq: &Frame) -> ThetaMatrix {
    let wp = fp.get_c(FrameLabel::TransversePlus);
    let wm = fp.get_c(FrameLabel::TransverseMinus);
    let vp = v_of(&fq.get_c(FrameLabel::TransversePlus));
    let vm = v_of(&fq.get_c(FrameLabel::TransverseMinus));
    ThetaMatrix {
        plus_plus: krein_pair(&wp, &vp).re,
        plus_minus: krein_pair(&wm, &vp).re,
        minus_plus: krein_pair(&wp, &vm).re,
        minus_minus: krein_pair(&wm, &vm).re,
    }
}

fn frames(alpha: &SL2Element, p: &ConePoint) -> Result<(LorentzMatrix, ConePoint, Frame, Frame)> {
    let v = lorentz_of(alpha);
    let q = p.transformed(&v.inverse())?;
    Ok((v, q, Frame::at(p)?, Frame::at(&q)?))
}

/// The transversal block of the local action.
pub fn theta_matrix(alpha: &SL2Element, p: &ConePoint) -> Result<ThetaMatrix> {
    let (v, _, fp, fq) = frames(alpha, p)?;
    Ok(transverse_block(|w| v.apply_c(w), &fp, &fq))
}

/// The transversal block of the conjugate action J′ₚ V(α) J′_{Λp}.
pub fn theta_matrix_conjugate(alpha: &SL2Element, p: &ConePoint) -> Result<ThetaMatrix> {
    let (v, q, fp, fq) = frames(alpha, p)?;
    let (jp, jq) = (fiber_symmetry(p), fiber_symmetry(&q));
    let m = jp * v.matrix() * jq;
    Ok(transverse_block(|w| LorentzMatrix::from_matrix(m).apply_c(w), &fp, &fq))
}

/// (cos Θ(α,p), sin Θ(α,p)).
pub fn theta(alpha: &SL2Element, p: &ConePoint) -> Result<PhasePair> {
    Ok(theta_matrix(alpha, p)?.phase())
}

/// Closed forms of Θ for rotations in the 2–3 plane by `angle`:
/// cos Θ = (p²p³ sinθ/ρ + ρ cosθ)/D and sin Θ = −r p¹ sinθ/(Dρ),
/// D = √((p¹)² + (p² cosθ + p³ sinθ)²), ρ = √((p¹)² + (p²)²).
pub fn theta_rotation_23(angle: f64, p: &ConePoint) -> PhasePair {
    let [p1, p2, p3] = p.spatial();
    let (s, c) = angle.sin_cos();
    let rho = p1.hypot(p2);
    let d = p1.hypot(p2 * c + p3 * s);
    PhasePair {
        cos: (p2 * p3 * s / rho + rho * c) / d,
        sin: -p.r() * p1 * s / (d * rho),
    }
}

/// Closed forms of Θ for rotations in the 1–3 plane: the 2–3 forms with p¹
/// and p² exchanged, and the sign of sin Θ reversed (the exchange is a
/// reflection, which flips helicity).
pub fn theta_rotation_13(angle: f64, p: &ConePoint) -> PhasePair {
    let [p1, p2, p3] = p.spatial();
    let swapped = ConePoint::from_spatial([p2, p1, p3]).expect("same radius as p");
    let t = theta_rotation_23(angle, &swapped);
    PhasePair {
        cos: t.cos,
        sin: -t.sin,
    }
}

/// u = V(α)φ(Λ(α)p) − (w₁⁺g₊ + w₁⁻g₋)(p), where (g₊, g₋) = R(Θ)(f₊, f₋)(Λ(α)p)
/// and φ is the embedded transversal state. Krein-null and Krein-orthogonal to
/// the transversal plane.
pub fn gauge_residue(alpha: &SL2Element, s: &TransversalState, p: &ConePoint) -> Result<C4> {
    let (v, q, fp, fq) = frames(alpha, p)?;
    let [a, b] = s.eval(&q)?;
    let moved = v.apply_c(&(fq.get_c(FrameLabel::TransversePlus) * a + fq.get_c(FrameLabel::TransverseMinus) * b));
    let block = transverse_block(|w| v.apply_c(w), &fp, &fq);
    let [ga, gb] = rotate(&block.phase(), [a, b]);
    Ok(moved - fp.get_c(FrameLabel::TransversePlus) * ga - fp.get_c(FrameLabel::TransverseMinus) * gb)
}

/// Krein-norm of u and its Krein pairings with w₁±(p), as one residual.
pub fn residue_defect(u: &C4, p: &ConePoint) -> Result<f64> {
    let f = Frame::at(p)?;
    Ok(krein_pair(u, u)
        .norm()
        .max(krein_pair(&f.get_c(FrameLabel::TransversePlus), u).norm())
        .max(krein_pair(&f.get_c(FrameLabel::TransverseMinus), u).norm()))
}

fn rotate(phase: &PhasePair, [a, b]: [C64; 2]) -> [C64; 2] {
    [a * phase.cos + b * phase.sin, b * phase.cos - a * phase.sin]
}

/// (f₊, f₋)(p) ↦ e^{ia·p} R(Θ(α,p)) (f₊, f₋)(Λ(α)p).
pub fn act_tr(g: &GroupElement, s: &TransversalState) -> TransversalState {
    let g = *g;
    let inner = s.clone();
    let v = lorentz_of(&g.element);
    let v_inv = v.inverse();
    let support = s.support().map(|pts| crate::rep::push_points(&v, pts));
    TransversalState::new(
        move |p| {
            let q = p.transformed(&v_inv)?;
            let (fp, fq) = (Frame::at(p)?, Frame::at(&q)?);
            let block = transverse_block(|w| v.apply_c(w), &fp, &fq);
            let phase = C64::from_polar(1.0, g.translation.minkowski(&p.four_vector()));
            let [a, b] = rotate(&block.phase(), inner.eval(&q)?);
            Ok([a * phase, b * phase])
        },
        support,
    )
}

/// 𝒰 = [[−i, −i], [1, −1]]/√2, taking helicity components (f₁, f₋₁) to (f₊, f₋).
pub fn helicity_matrix() -> Matrix2<C64> {
    let h = FRAC_1_SQRT_2;
    Matrix2::new(
        C64::new(0.0, -h),
        C64::new(0.0, -h),
        C64::new(h, 0.0),
        C64::new(-h, 0.0),
    )
}

/// (f₁, f₋₁) = 𝒰⁻¹(f₊, f₋) at p.
pub fn helicity_components(s: &TransversalState, p: &ConePoint) -> Result<[C64; 2]> {
    let [a, b] = s.eval(p)?;
    let u_inv = helicity_matrix().adjoint();
    Ok([
        u_inv[(0, 0)] * a + u_inv[(0, 1)] * b,
        u_inv[(1, 0)] * a + u_inv[(1, 1)] * b,
    ])
}

/// The helicity-basis state (f₁, f₋₁) = 𝒰⁻¹(f₊, f₋).
pub fn helicity_diagonalize(s: &TransversalState) -> HelicityState {
    let s = s.clone();
    HelicityState(Arc::new(move |p| helicity_components(&s, p)))
}

/// A state in the helicity basis, (f₁, f₋₁).
#[derive(Clone)]
pub struct HelicityState(Arc<PairFn>);

impl HelicityState {
    pub fn eval(&self, p: &ConePoint) -> Result<[C64; 2]> {
        (self.0)(p)
    }
}

/// 𝒰⁻¹ R(Θ) 𝒰, which is diag(e^{iΘ}, e^{−iΘ}).
pub fn helicity_multipliers(alpha: &SL2Element, p: &ConePoint) -> Result<Matrix2<C64>> {
    let phase = theta(alpha, p)?;
    let u = helicity_matrix();
    let r = phase.rotation().map(|x| C64::new(x, 0.0));
    Ok(u.adjoint() * r * u)
}
