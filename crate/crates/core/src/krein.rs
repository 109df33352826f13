//! Pointwise Krein geometry on the cone.
//!
//! B(p) = V(β(p))ᵀV(β(p)) is the fiber metric of the positive-definite
//! product, J′ₚ = J B(p) the fiber fundamental symmetry. In terms of n = p⃗/r,
//!
//! ```text
//! B(p)  = [[ (r⁻²+r²)/2,        (r⁻²−r²)/2 nᵀ              ],
//!          [ (r⁻²−r²)/2 n,  1 + ((r⁻²+r²)/2 − 1) n nᵀ      ]]
//! √B(p) = [[ (r⁻¹+r)/2,         (r⁻¹−r)/2 nᵀ               ],
//!          [ (r⁻¹−r)/2 n,   1 + ((r⁻¹+r)/2 − 1) n nᵀ       ]]
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::cone::{section_lorentz, ConePoint};
use crate::sl2c::KreinMetric;
use crate::{Error, Result, C4, C64};

/// Relative distance from the p³ axis below which the transverse vectors are
/// considered undefined.
pub const POLE_TOL: f64 = 1e-15;

fn metric_block(p: &ConePoint, diag: f64, off: f64) -> Matrix4<f64> {
    let n = p.direction();
    let mut m = Matrix4::identity();
    m[(0, 0)] = diag;
    for i in 0..3 {
        m[(0, i + 1)] = off * n[i];
        m[(i + 1, 0)] = off * n[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += (diag - 1.0) * n[i] * n[j];
        }
    }
    m
}

/// B(p), in closed form. Eigenvalues 1, 1, r⁻², r².
pub fn gram(p: &ConePoint) -> Matrix4<f64> {
    let (lo, hi) = (p.r().powi(-2), p.r().powi(2));
    metric_block(p, (lo + hi) / 2.0, (lo - hi) / 2.0)
}

/// √B(p), the positive square root of [`gram`], in closed form.
pub fn gram_sqrt(p: &ConePoint) -> Matrix4<f64> {
    let (lo, hi) = (p.r().recip(), p.r());
    metric_block(p, (lo + hi) / 2.0, (lo - hi) / 2.0)
}

/// J′ₚ = J B(p) = V(β(p))⁻¹ J V(β(p)). An involution, self-adjoint for B(p).
pub fn fiber_symmetry(p: &ConePoint) -> Matrix4<f64> {
    KreinMetric.matrix() * gram(p)
}

/// ⟨u, Jv⟩ with J = diag(−1, 1, 1, 1); conjugate-linear in u.
pub fn krein_pair(u: &C4, v: &C4) -> C64 {
    u.dotc(&KreinMetric.apply(v))
}

/// ⟨u, v⟩ on ℂ⁴; conjugate-linear in u.
pub fn plain_pair(u: &C4, v: &C4) -> C64 {
    u.dotc(v)
}

/// Names of the four frame vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameLabel {
    /// w₁⁺: transverse, in the plane orthogonal to p⃗ and the p³ axis.
    #[serde(rename = "w1+")]
    TransversePlus,
    /// w₁⁻: transverse, in the plane of p⃗ and the p³ axis.
    #[serde(rename = "w1-")]
    TransverseMinus,
    /// w_{r⁻²} = (1, n)/√2, parallel to p.
    #[serde(rename = "wr-2")]
    ForwardNull,
    /// w_{r²} = (1, −n)/√2.
    #[serde(rename = "wr2")]
    BackwardNull,
}

impl FrameLabel {
    pub const ALL: [FrameLabel; 4] = [
        FrameLabel::TransversePlus,
        FrameLabel::TransverseMinus,
        FrameLabel::ForwardNull,
        FrameLabel::BackwardNull,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FrameLabel::TransversePlus => "w1+",
            FrameLabel::TransverseMinus => "w1-",
            FrameLabel::ForwardNull => "wr-2",
            FrameLabel::BackwardNull => "wr2",
        }
    }

    /// The B(p) eigenvalue belonging to this vector.
    pub fn eigenvalue(&self, r: f64) -> f64 {
        match self {
            FrameLabel::TransversePlus | FrameLabel::TransverseMinus => 1.0,
            FrameLabel::ForwardNull => r.powi(-2),
            FrameLabel::BackwardNull => r.powi(2),
        }
    }

    pub fn is_transverse(&self) -> bool {
        matches!(self, FrameLabel::TransversePlus | FrameLabel::TransverseMinus)
    }
}

impl fmt::Display for FrameLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FrameLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FrameLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidPacket(format!("unknown frame label `{s}`")))
    }
}

/// The orthonormal eigenframe of B(p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub transverse_plus: Vector4<f64>,
    pub transverse_minus: Vector4<f64>,
    pub forward_null: Vector4<f64>,
    pub backward_null: Vector4<f64>,
}

impl Frame {
    /// The closed-form frame. Fails on the p³ axis, where the transverse
    /// vectors have no limit.
    pub fn at(p: &ConePoint) -> Result<Frame> {
        if p.is_pole(POLE_TOL) {
            return Err(Error::DegenerateCoordinates(format!(
                "transverse frame undefined on the p³ axis at p⃗ = {:?}",
                p.spatial()
            )));
        }
        Ok(Self::closed_form(p))
    }

    /// As [`Frame::at`], but on the p³ axis returns the azimuth-zero limit
    /// w₁⁺ = (0,1,0,0), w₁⁻ = (0,0,sgn p³,0). Any orthonormal pair in the
    /// transverse plane would do equally well; only Θ depends on the choice.
    pub fn at_or_pole_limit(p: &ConePoint) -> Frame {
        if p.is_pole(POLE_TOL) {
            let [_, _, z] = p.spatial();
            let mut f = Self::closed_form_null(p);
            f.transverse_plus = Vector4::new(0.0, 1.0, 0.0, 0.0);
            f.transverse_minus = Vector4::new(0.0, 0.0, z.signum(), 0.0);
            f
        } else {
            Self::closed_form(p)
        }
    }

    fn closed_form_null(p: &ConePoint) -> Frame {
        let [a, b, c] = p.direction();
        let h = FRAC_1_SQRT_2;
        Frame {
            transverse_plus: Vector4::zeros(),
            transverse_minus: Vector4::zeros(),
            forward_null: Vector4::new(h, h * a, h * b, h * c),
            backward_null: Vector4::new(h, -h * a, -h * b, -h * c),
        }
    }

    fn closed_form(p: &ConePoint) -> Frame {
        let [p1, p2, p3] = p.spatial();
        let r = p.r();
        let rho = p.transverse_norm();
        let mut f = Self::closed_form_null(p);
        f.transverse_plus = Vector4::new(0.0, p2 / rho, -p1 / rho, 0.0);
        f.transverse_minus = Vector4::new(0.0, p1 * p3 / (rho * r), p2 * p3 / (rho * r), -rho / r);
        f
    }

    pub fn get(&self, label: FrameLabel) -> &Vector4<f64> {
        match label {
            FrameLabel::TransversePlus => &self.transverse_plus,
            FrameLabel::TransverseMinus => &self.transverse_minus,
            FrameLabel::ForwardNull => &self.forward_null,
            FrameLabel::BackwardNull => &self.backward_null,
        }
    }

    pub fn get_c(&self, label: FrameLabel) -> C4 {
        self.get(label).map(|x| C64::new(x, 0.0))
    }

    /// Frame vectors as the columns of an orthogonal matrix, in [`FrameLabel::ALL`] order.
    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_columns(&[
            self.transverse_plus,
            self.transverse_minus,
            self.forward_null,
            self.backward_null,
        ])
    }

    /// Coefficients ⟨w_λ, v⟩ in [`FrameLabel::ALL`] order.
    pub fn coefficients(&self, v: &C4) -> [C64; 4] {
        FrameLabel::ALL.map(|l| {
            let w = self.get(l);
            (0..4).map(|i| v[i] * w[i]).sum()
        })
    }

    /// Σ c_λ w_λ.
    pub fn combine(&self, c: &[C64; 4]) -> C4 {
        let mut out = C4::zeros();
        for (l, ci) in FrameLabel::ALL.iter().zip(c) {
            let w = self.get(*l);
            for i in 0..4 {
                out[i] += ci * w[i];
            }
        }
        out
    }
}

/// Closed-form B(p) against the numeric product V(β(p))ᵀV(β(p)).
pub fn gram_residual(p: &ConePoint) -> f64 {
    let v = *section_lorentz(p).matrix();
    crate::max_abs(&(gram(p) - v.transpose() * v))
}
