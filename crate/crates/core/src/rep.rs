//! Momentum-space wave functions and the three actions of the Poincaré cover.
//!
//! A [`Wave`] is an immutable expression tree evaluated pointwise on the cone,
//! so acted-on wave functions are exact compositions and never interpolated.
//!
//! For g = (a, α):
//!
//! * local:     (U(g)φ)(p) = e^{ia·p} V(α) φ(Λ(α)p)
//! * conjugate: (U′(g)φ)(p) = e^{ia·p} J′ₚ V(α) J′_{Λ(α)p} φ(Λ(α)p)
//! * induced:   (U(g)ψ)(p) = e^{ia·p} V(γ(α,p)) ψ(Λ(α)p)
//!
//! and the intertwiner φ(p) = V(β(p))⁻¹ ψ(p) carries the induced action onto
//! the local one.

use std::fmt;
use std::sync::Arc;

use crate::cone::{section_lorentz, wigner_element_at, ConePoint};
use crate::krein::{fiber_symmetry, Frame, FrameLabel};
use crate::sl2c::{lorentz_of, FourVector, LorentzMatrix, SL2Element};
use crate::{Result, C4, C64};

/// Scalar function on the cone.
pub type ScalarFn = dyn Fn(&ConePoint) -> C64 + Send + Sync;

/// ℂ⁴-valued function on the cone.
pub type VectorFn = dyn Fn(&ConePoint) -> Result<C4> + Send + Sync;

/// A scalar profile multiplying a frame vector.
#[derive(Clone)]
pub enum Envelope {
    Constant(C64),
    /// A exp(−|p⃗ − p⃗₀|²/(2σ²)).
    Gaussian {
        center: [f64; 3],
        sigma: f64,
        amplitude: C64,
    },
    Custom(Arc<ScalarFn>),
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Constant(c) => write!(f, "Constant({c})"),
            Envelope::Gaussian {
                center,
                sigma,
                amplitude,
            } => write!(f, "Gaussian({center:?}, σ={sigma}, A={amplitude})"),
            Envelope::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Envelope {
    pub fn gaussian(center: [f64; 3], sigma: f64, amplitude: C64) -> Self {
        Envelope::Gaussian {
            center,
            sigma,
            amplitude,
        }
    }

    pub fn eval(&self, p: &ConePoint) -> C64 {
        match self {
            Envelope::Constant(c) => *c,
            Envelope::Gaussian {
                center,
                sigma,
                amplitude,
            } => {
                let q = p.spatial();
                let d2: f64 = (0..3).map(|i| (q[i] - center[i]).powi(2)).sum();
                amplitude * (-d2 / (2.0 * sigma * sigma)).exp()
            }
            Envelope::Custom(f) => f(p),
        }
    }

    /// Points bounding the region outside which the envelope is negligible
    /// (below e^{−18} of its peak), or `None` when it has no such region.
    pub fn support(&self) -> Option<Vec<[f64; 3]>> {
        match self {
            Envelope::Gaussian { center, sigma, .. } => Some(ball_cloud(*center, 6.0 * sigma)),
            _ => None,
        }
    }
}

/// Centre plus 28 points on the sphere of the given radius: the 26 lattice
/// directions and ±(centre direction). The origin is added when the ball
/// contains it, so that radial windows reach down to r = 0.
fn ball_cloud(center: [f64; 3], radius: f64) -> Vec<[f64; 3]> {
    let mut dirs: Vec<[f64; 3]> = Vec::with_capacity(28);
    for i in -1i32..=1 {
        for j in -1i32..=1 {
            for k in -1i32..=1 {
                if (i, j, k) != (0, 0, 0) {
                    dirs.push([i as f64, j as f64, k as f64]);
                }
            }
        }
    }
    dirs.push(center);
    dirs.push([-center[0], -center[1], -center[2]]);
    let mut out = vec![center];
    if center.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
        out.push([0.0; 3]);
    }
    for d in dirs {
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n > 0.0 {
            out.push([
                center[0] + radius * d[0] / n,
                center[1] + radius * d[1] / n,
                center[2] + radius * d[2] / n,
            ]);
        }
    }
    out
}

/// An element (a, α) of the semidirect product of translations and SL(2,ℂ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub translation: FourVector,
    pub element: SL2Element,
}

impl GroupElement {
    pub fn new(translation: FourVector, element: SL2Element) -> Self {
        GroupElement { translation, element }
    }

    pub fn identity() -> Self {
        Self::new(FourVector::ZERO, SL2Element::identity())
    }

    pub fn translation(a: FourVector) -> Self {
        Self::new(a, SL2Element::identity())
    }

    pub fn homogeneous(alpha: SL2Element) -> Self {
        Self::new(FourVector::ZERO, alpha)
    }

    /// (a, α)(b, δ) = (a + V(α)b, αδ).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let v = lorentz_of(&self.element);
        GroupElement::new(
            self.translation + v.apply(&other.translation),
            self.element * other.element,
        )
    }

    /// (a, α)⁻¹ = (−V(α)⁻¹a, α⁻¹).
    pub fn inverse(&self) -> GroupElement {
        let v_inv = lorentz_of(&self.element).inverse();
        GroupElement::new(
            FourVector::ZERO - v_inv.apply(&self.translation),
            self.element.inverse(),
        )
    }
}

/// A group element with its Lorentz matrices precomputed for repeated evaluation.
#[derive(Debug, Clone, Copy)]
struct Action {
    g: GroupElement,
    v: LorentzMatrix,
    v_inv: LorentzMatrix,
}

impl Action {
    fn new(g: GroupElement) -> Self {
        let v = lorentz_of(&g.element);
        Action {
            g,
            v,
            v_inv: v.inverse(),
        }
    }

    fn phase(&self, p: &ConePoint) -> C64 {
        C64::from_polar(1.0, self.g.translation.minkowski(&p.four_vector()))
    }

    fn source(&self, p: &ConePoint) -> Result<ConePoint> {
        p.transformed(&self.v_inv)
    }

    /// Images of support points under p ↦ V(α)p. The apex is fixed.
    fn push_support(&self, pts: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
        push_points(&self.v, pts)
    }
}

pub(crate) fn push_points(v: &LorentzMatrix, pts: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    pts.into_iter()
        .filter_map(|q| {
            if q == [0.0; 3] {
                return Some(q);
            }
            let q = ConePoint::from_spatial(q).ok()?.transformed(v).ok()?;
            Some(q.spatial())
        })
        .collect()
}

enum Node {
    Zero,
    Constant(C4),
    Momentum,
    Frame {
        label: FrameLabel,
        envelope: Envelope,
        pole_limit: bool,
    },
    Scale(C64, Wave),
    Sum(Vec<Wave>),
    Local(Action, Wave),
    Conjugate(Action, Wave),
    Induced(Action, Wave),
    ToLocal(Wave),
    FromLocal(Wave),
    FiberSymmetry(Wave),
    Custom {
        f: Arc<VectorFn>,
        support: Option<Vec<[f64; 3]>>,
    },
}

/// A ℂ⁴-valued wave function on the cone.
#[derive(Clone)]
pub struct Wave(Arc<Node>);

impl fmt::Debug for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Zero => f.write_str("0"),
            Node::Constant(c) => write!(f, "const{:?}", c.as_slice()),
            Node::Momentum => f.write_str("p"),
            Node::Frame { label, envelope, .. } => write!(f, "{label}·{envelope:?}"),
            Node::Scale(c, w) => write!(f, "({c})·{w:?}"),
            Node::Sum(ws) => f.debug_list().entries(ws).finish(),
            Node::Local(a, w) => write!(f, "U{:?}[{w:?}]", a.g),
            Node::Conjugate(a, w) => write!(f, "U′{:?}[{w:?}]", a.g),
            Node::Induced(a, w) => write!(f, "Uind{:?}[{w:?}]", a.g),
            Node::ToLocal(w) => write!(f, "W[{w:?}]"),
            Node::FromLocal(w) => write!(f, "W⁻¹[{w:?}]"),
            Node::FiberSymmetry(w) => write!(f, "J′[{w:?}]"),
            Node::Custom { .. } => f.write_str("custom"),
        }
    }
}

fn real_c4(v: &nalgebra::Vector4<f64>) -> C4 {
    v.map(|x| C64::new(x, 0.0))
}

fn apply_real(m: &nalgebra::Matrix4<f64>, v: &C4) -> C4 {
    C4::from_fn(|i, _| (0..4).map(|k| v[k] * m[(i, k)]).sum())
}

impl Wave {
    fn node(n: Node) -> Self {
        Wave(Arc::new(n))
    }

    pub fn zero() -> Self {
        Self::node(Node::Zero)
    }

    /// The same vector at every point.
    pub fn constant(c: C4) -> Self {
        Self::node(Node::Constant(c))
    }

    /// φ(p) = p, the four-momentum itself.
    pub fn momentum() -> Self {
        Self::node(Node::Momentum)
    }

    /// φ(p) = w_label(p)·f(p). Fails on evaluation at the p³ axis for the
    /// transverse labels.
    pub fn frame(label: FrameLabel, envelope: Envelope) -> Self {
        Self::node(Node::Frame {
            label,
            envelope,
            pole_limit: false,
        })
    }

    /// As [`Wave::frame`], using the pole-limit frame on the p³ axis.
    pub fn frame_with_pole_limit(label: FrameLabel, envelope: Envelope) -> Self {
        Self::node(Node::Frame {
            label,
            envelope,
            pole_limit: true,
        })
    }

    pub fn custom<F>(f: F, support: Option<Vec<[f64; 3]>>) -> Self
    where
        F: Fn(&ConePoint) -> Result<C4> + Send + Sync + 'static,
    {
        Self::node(Node::Custom {
            f: Arc::new(f),
            support,
        })
    }

    /// True when both handles share the same expression tree.
    pub fn ptr_eq(a: &Wave, b: &Wave) -> bool {
        Arc::ptr_eq(&a.0, &b.0)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::node(Node::Scale(c, self.clone()))
    }

    pub fn sum<I: IntoIterator<Item = Wave>>(terms: I) -> Self {
        Self::node(Node::Sum(terms.into_iter().collect()))
    }

    pub fn add(&self, other: &Wave) -> Self {
        Self::sum([self.clone(), other.clone()])
    }

    pub fn sub(&self, other: &Wave) -> Self {
        Self::sum([self.clone(), other.scale(C64::new(-1.0, 0.0))])
    }

    /// φ ↦ J′ₚ φ(p).
    pub fn fiber_symmetry(&self) -> Self {
        Self::node(Node::FiberSymmetry(self.clone()))
    }

    pub fn eval(&self, p: &ConePoint) -> Result<C4> {
        Ok(match &*self.0 {
            Node::Zero => C4::zeros(),
            Node::Constant(c) => *c,
            Node::Momentum => p.four_vector().to_complex(),
            Node::Frame {
                label,
                envelope,
                pole_limit,
            } => {
                let frame = if *pole_limit {
                    Frame::at_or_pole_limit(p)
                } else if label.is_transverse() {
                    Frame::at(p)?
                } else {
                    // the null vectors are defined everywhere
                    Frame::at_or_pole_limit(p)
                };
                real_c4(frame.get(*label)) * envelope.eval(p)
            }
            Node::Scale(c, w) => w.eval(p)? * *c,
            Node::Sum(ws) => {
                let mut acc = C4::zeros();
                for w in ws {
                    acc += w.eval(p)?;
                }
                acc
            }
            Node::Local(a, w) => {
                let q = a.source(p)?;
                a.v.apply_c(&w.eval(&q)?) * a.phase(p)
            }
            Node::Conjugate(a, w) => {
                let q = a.source(p)?;
                let inner = apply_real(&fiber_symmetry(&q), &w.eval(&q)?);
                apply_real(&fiber_symmetry(p), &a.v.apply_c(&inner)) * a.phase(p)
            }
            Node::Induced(a, w) => {
                let q = a.source(p)?;
                let gamma = wigner_element_at(&a.g.element, p, &q);
                lorentz_of(&gamma).apply_c(&w.eval(&q)?) * a.phase(p)
            }
            Node::ToLocal(w) => section_lorentz(p).inverse().apply_c(&w.eval(p)?),
            Node::FromLocal(w) => section_lorentz(p).apply_c(&w.eval(p)?),
            Node::FiberSymmetry(w) => apply_real(&fiber_symmetry(p), &w.eval(p)?),
            Node::Custom { f, .. } => f(p)?,
        })
    }

    /// Spatial momenta bounding the region where the wave is non-negligible,
    /// or `None` if some part of it is not localized.
    pub fn support(&self) -> Option<Vec<[f64; 3]>> {
        match &*self.0 {
            Node::Zero => Some(Vec::new()),
            Node::Constant(_) | Node::Momentum => None,
            Node::Frame { envelope, .. } => envelope.support(),
            Node::Scale(_, w) | Node::ToLocal(w) | Node::FromLocal(w) | Node::FiberSymmetry(w) => w.support(),
            Node::Sum(ws) => {
                let mut out = Vec::new();
                for w in ws {
                    out.extend(w.support()?);
                }
                Some(out)
            }
            Node::Local(a, w) | Node::Conjugate(a, w) | Node::Induced(a, w) => {
                w.support().map(|pts| a.push_support(pts))
            }
            Node::Custom { support, .. } => support.clone(),
        }
    }
}

/// (U(g)φ)(p) = e^{ia·p} V(α) φ(Λ(α)p).
pub fn act_local(g: &GroupElement, phi: &Wave) -> Wave {
    Wave::node(Node::Local(Action::new(*g), phi.clone()))
}

/// (U′(g)φ)(p) = e^{ia·p} J′ₚ V(α) J′_{Λ(α)p} φ(Λ(α)p), the Krein-conjugate action.
pub fn act_conjugate(g: &GroupElement, phi: &Wave) -> Wave {
    Wave::node(Node::Conjugate(Action::new(*g), phi.clone()))
}

/// (U(g)ψ)(p) = e^{ia·p} V(γ(α,p)) ψ(Λ(α)p), the action induced from the little group.
pub fn act_induced(g: &GroupElement, psi: &Wave) -> Wave {
    Wave::node(Node::Induced(Action::new(*g), psi.clone()))
}

/// φ(p) = V(β(p))⁻¹ ψ(p): from the induced picture to the local one.
pub fn intertwine_to_local(psi: &Wave) -> Wave {
    Wave::node(Node::ToLocal(psi.clone()))
}

/// ψ(p) = V(β(p)) φ(p): from the local picture to the induced one.
pub fn intertwine_to_induced(phi: &Wave) -> Wave {
    Wave::node(Node::FromLocal(phi.clone()))
}

/// ‖V(γ(δα,p)) − V(γ(δ,p)) V(γ(α,Λ(δ)p))‖∞.
pub fn multiplier_cocycle_check(delta: &SL2Element, alpha: &SL2Element, p: &ConePoint) -> Result<f64> {
    let q = crate::cone::boost_action(delta, p)?;
    let lhs = lorentz_of(&crate::cone::wigner_element(&(*delta * *alpha), p)?);
    let rhs =
        lorentz_of(&crate::cone::wigner_element(delta, p)?) * lorentz_of(&crate::cone::wigner_element(alpha, &q)?);
    Ok(crate::max_abs(&(lhs.matrix() - rhs.matrix())))
}

/// ‖Q J Qᵀ J − 1‖∞ for the multiplier Q = V(γ(α,p)).
pub fn multiplier_krein_residual(alpha: &SL2Element, p: &ConePoint) -> Result<f64> {
    let q = *lorentz_of(&crate::cone::wigner_element(alpha, p)?).matrix();
    let j = crate::sl2c::KreinMetric.matrix();
    Ok(crate::max_abs(
        &(q * j * q.transpose() * j - nalgebra::Matrix4::identity()),
    ))
}

/// Largest entrywise difference of two waves over the given points, scaled by
/// the largest entry of either.
pub fn pointwise_distance(a: &Wave, b: &Wave, points: &[ConePoint]) -> Result<f64> {
    let mut worst = 0.0_f64;
    for p in points {
        let (x, y) = (a.eval(p)?, b.eval(p)?);
        let scale = crate::max_abs_c(&x).max(crate::max_abs_c(&y)).max(1.0);
        worst = worst.max(crate::max_abs_c(&(x - y)) / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pts() -> Vec<ConePoint> {
        [
            [0.3, -1.0, 0.4],
            [1.2, 0.5, -0.7],
            [-0.2, 0.1, 2.0],
            [0.9, 0.9, 0.9],
            [-1.5, 0.2, -0.1],
        ]
        .iter()
        .map(|&v| ConePoint::from_spatial(v).unwrap())
        .collect()
    }

    fn alpha() -> SL2Element {
        SL2Element::project(Matrix2::new(c(1.1, 0.2), c(0.3, -0.4), c(-0.2, 0.5), c(0.8, 0.1)))
            .unwrap()
            .0
    }

    fn beta() -> SL2Element {
        SL2Element::project(Matrix2::new(c(0.7, -0.3), c(0.1, 0.2), c(0.4, 0.4), c(1.3, 0.0)))
            .unwrap()
            .0
    }

    fn wave() -> Wave {
        Wave::sum([
            Wave::frame(
                FrameLabel::TransversePlus,
                Envelope::gaussian([0.5, 0.2, 0.1], 0.8, c(1.0, 0.5)),
            ),
            Wave::frame(
                FrameLabel::BackwardNull,
                Envelope::gaussian([-0.3, 0.6, 0.2], 0.6, c(0.0, -1.0)),
            ),
            Wave::constant(C4::new(c(0.1, 0.0), c(0.0, 0.2), c(0.3, 0.0), c(0.0, 0.0))),
        ])
    }

    #[test]
    fn identity_acts_trivially() {
        let g = GroupElement::identity();
        let w = wave();
        for act in [act_local, act_conjugate, act_induced] {
            assert!(pointwise_distance(&act(&g, &w), &w, &pts()).unwrap() < 1e-14);
        }
    }

    #[test]
    fn time_translation_is_a_phase() {
        let t = 0.7;
        let g = GroupElement::translation(FourVector::new(t, 0.0, 0.0, 0.0));
        let w = wave();
        let moved = act_local(&g, &w);
        for p in pts() {
            let expected = w.eval(&p).unwrap() * C64::from_polar(1.0, t * p.r());
            assert!(crate::max_abs_c(&(moved.eval(&p).unwrap() - expected)) < 1e-14);
            let conj = act_conjugate(&g, &w).eval(&p).unwrap();
            assert!(crate::max_abs_c(&(conj - expected)) < 1e-12);
        }
    }

    #[test]
    fn composition_law_for_all_actions() {
        let g1 = GroupElement::new(FourVector::new(0.3, -0.2, 0.5, 0.1), alpha());
        let g2 = GroupElement::new(FourVector::new(-0.4, 0.6, 0.0, 0.2), beta());
        let w = wave();
        for act in [act_local, act_conjugate, act_induced] {
            let two_step = act(&g1, &act(&g2, &w));
            let one_step = act(&g1.compose(&g2), &w);
            assert!(pointwise_distance(&two_step, &one_step, &pts()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_the_action() {
        let g = GroupElement::new(FourVector::new(0.3, -0.2, 0.5, 0.1), alpha());
        let w = wave();
        let back = act_local(&g.inverse(), &act_local(&g, &w));
        assert!(pointwise_distance(&back, &w, &pts()).unwrap() < 1e-12);
        let e = g.compose(&g.inverse());
        assert!(e.translation.0.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn conjugate_is_local_conjugated_by_fiber_symmetry() {
        let g = GroupElement::new(FourVector::new(0.1, 0.2, -0.3, 0.4), alpha());
        let w = wave();
        let sandwiched = act_local(&g, &w.fiber_symmetry()).fiber_symmetry();
        let direct = act_conjugate(&g, &w);
        assert!(pointwise_distance(&sandwiched, &direct, &pts()).unwrap() < 1e-12);
    }

    #[test]
    fn conjugate_matches_product_of_section_matrices() {
        // V(β(p))⁻¹ V(β(p))^{T,−1} V(α)^{T,−1} V(β(q))ᵀ V(β(q)), q = Λ(α)p
        let a = alpha();
        let w = wave();
        let moved = act_conjugate(&GroupElement::homogeneous(a), &w);
        let v = *lorentz_of(&a).matrix();
        for p in pts() {
            let q = crate::cone::boost_action(&a, &p).unwrap();
            let bp = *section_lorentz(&p).matrix();
            let bq = *section_lorentz(&q).matrix();
            let m = bp.try_inverse().unwrap()
                * bp.transpose().try_inverse().unwrap()
                * v.transpose().try_inverse().unwrap()
                * bq.transpose()
                * bq;
            let expected = apply_real(&m, &w.eval(&q).unwrap());
            let got = moved.eval(&p).unwrap();
            assert!(crate::max_abs_c(&(got - expected)) < 1e-10 * crate::max_abs_c(&expected).max(1.0));
        }
    }

    #[test]
    fn intertwiner_carries_induced_to_local() {
        let g = GroupElement::new(FourVector::new(0.2, 0.0, -0.1, 0.3), alpha());
        let psi = wave();
        let lhs = act_local(&g, &intertwine_to_local(&psi));
        let rhs = intertwine_to_local(&act_induced(&g, &psi));
        assert!(pointwise_distance(&lhs, &rhs, &pts()).unwrap() < 1e-12);
        let round = intertwine_to_induced(&intertwine_to_local(&psi));
        assert!(pointwise_distance(&round, &psi, &pts()).unwrap() < 1e-12);
        let flat = Wave::constant(C4::new(c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0), c(0.5, 0.0)));
        let at_standard = intertwine_to_local(&flat).eval(&ConePoint::standard()).unwrap();
        assert!(crate::max_abs_c(&(at_standard - flat.eval(&ConePoint::standard()).unwrap())) < 1e-15);
    }

    #[test]
    fn induced_multiplier_at_standard_point() {
        let little = crate::sl2c::little_group_element(c(0.2, -0.7), 1.3);
        let psi = Wave::constant(C4::new(c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.5, 0.5)));
        let got = act_induced(&GroupElement::homogeneous(little), &psi)
            .eval(&ConePoint::standard())
            .unwrap();
        let expected = lorentz_of(&little).apply_c(&psi.eval(&ConePoint::standard()).unwrap());
        assert!(crate::max_abs_c(&(got - expected)) < 1e-14);
    }

    #[test]
    fn multipliers() {
        let (a, d) = (alpha(), beta());
        for p in pts() {
            assert!(multiplier_cocycle_check(&SL2Element::identity(), &a, &p).unwrap() < 1e-14);
            assert!(multiplier_cocycle_check(&d, &d.inverse(), &p).unwrap() < 1e-10);
            assert!(multiplier_cocycle_check(&d, &a, &p).unwrap() < 1e-10);
            assert!(multiplier_krein_residual(&a, &p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn boost_of_transverse_minus_leaks_into_forward_null() {
        let lambda = 0.9;
        let g = GroupElement::homogeneous(SL2Element::alpha_03(lambda));
        let moved = act_local(
            &g,
            &Wave::frame(FrameLabel::TransverseMinus, Envelope::Constant(c(1.0, 0.0))),
        );
        for p in pts() {
            let [p1, p2, p3] = p.spatial();
            let f = Frame::at(&p).unwrap();
            let v = moved.eval(&p).unwrap();
            let coeff = f.coefficients(&v)[2];
            let rho = p1.hypot(p2);
            // the leak is t·(1, n) with t = sinh λ ρ/(p⁰cosh λ + p³sinh λ), and (1, n) = √2 w_{r⁻²}
            let t = lambda.sinh() * rho / (p.r() * lambda.cosh() + p3 * lambda.sinh());
            let expected = std::f64::consts::SQRT_2 * t;
            assert_abs_diff_eq!(coeff.re, expected, epsilon = 1e-12);
            assert_abs_diff_eq!(f.coefficients(&v)[3].norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn support_follows_the_action() {
        let w = Wave::frame(
            FrameLabel::TransversePlus,
            Envelope::gaussian([0.0, 0.0, 2.0], 0.1, c(1.0, 0.0)),
        );
        let boosted = act_local(&GroupElement::homogeneous(SL2Element::boost(3, 1.0)), &w);
        let pts = boosted.support().unwrap();
        let max_r = pts
            .iter()
            .map(|p| ConePoint::from_spatial(*p).unwrap().r())
            .fold(0.0, f64::max);
        // V(boost) stretches p³ by e
        assert!(max_r > 2.0 * 1f64.exp());
        assert!(Wave::momentum().support().is_none());
    }
}
