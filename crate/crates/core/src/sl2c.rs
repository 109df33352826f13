//! SL(2,ℂ), four-vectors and the covering homomorphism onto the Lorentz group.
//!
//! A four-vector p is identified with the hermitian matrix
//! p̂ = p⁰σ₀ + p¹σ₁ + p²σ₂ + p³σ₃, and α ∈ SL(2,ℂ) acts by p̂ ↦ α p̂ α*.
//! The same action written on ℂ⁴ is the real matrix
//! V(α) = S (α ⊗ ᾱ) S⁻¹, which is what [`lorentz_of`] returns.
//!
//! Conventions: [`lorentz_of`] is a homomorphism, V(αβ) = V(α)V(β), and the
//! momentum action used by the representations is Λ(α)p := V(α)⁻¹p, see
//! [`crate::cone::boost_action`].

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::{Index, Mul, Neg};

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Unimodularity tolerance accepted by [`SL2Element::new`].
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// A real four-vector (momentum or spacetime point), components (p⁰, p¹, p², p³).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourVector(pub [f64; 4]);

impl FourVector {
    pub const ZERO: FourVector = FourVector([0.0; 4]);

    pub const fn new(p0: f64, p1: f64, p2: f64, p3: f64) -> Self {
        FourVector([p0, p1, p2, p3])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    pub fn spatial(&self) -> [f64; 3] {
        [self.0[1], self.0[2], self.0[3]]
    }

    /// Minkowski pairing a·b = a⁰b⁰ − a⃗·b⃗.
    pub fn minkowski(&self, other: &FourVector) -> f64 {
        let (a, b) = (&self.0, &other.0);
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        FourVector([v[0], v[1], v[2], v[3]])
    }

    pub fn to_complex(&self) -> crate::C4 {
        self.to_vector().map(|x| C64::new(x, 0.0))
    }

    pub fn spatial_vector(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3])
    }
}

impl Index<usize> for FourVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x += y;
        }
        FourVector(r)
    }
}

impl std::ops::Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        let mut r = self.0;
        for (x, y) in r.iter_mut().zip(o.0) {
            *x -= y;
        }
        FourVector(r)
    }
}

/// The four Pauli matrices σ₀ = 1, σ₁, σ₂, σ₃.
pub fn pauli(mu: usize) -> Matrix2<C64> {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match mu {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => panic!("Pauli index out of range: {mu}"),
    }
}

/// p̂ = p⁰σ₀ + p¹σ₁ + p²σ₂ + p³σ₃. Hermitian, with det p̂ = p·p.
pub fn pauli_embed(p: &FourVector) -> Matrix2<C64> {
    let [p0, p1, p2, p3] = p.0;
    Matrix2::new(
        C64::new(p0 + p3, 0.0),
        C64::new(p1, -p2),
        C64::new(p1, p2),
        C64::new(p0 - p3, 0.0),
    )
}

/// An element of SL(2,ℂ), stored as its 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2Element(Matrix2<C64>);

impl SL2Element {
    /// Builds [[a, b], [c, d]], rejecting matrices with |det − 1| > 1e-12.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        Self::from_matrix(Matrix2::new(a, b, c, d))
    }

    pub fn from_matrix(m: Matrix2<C64>) -> Result<Self> {
        let deviation = (m.determinant() - C64::new(1.0, 0.0)).norm();
        if !(deviation <= UNIMODULAR_TOL) {
            return Err(Error::NotUnimodular { deviation });
        }
        Ok(SL2Element(m))
    }

    /// Wraps a matrix that is unimodular by construction.
    pub(crate) fn from_matrix_unchecked(m: Matrix2<C64>) -> Self {
        SL2Element(m)
    }

    /// Rescales an invertible matrix by 1/√det so that it lands in SL(2,ℂ).
    /// Returns the element and |√det − 1|, the size of the correction.
    pub fn project(m: Matrix2<C64>) -> Result<(Self, f64)> {
        let det = m.determinant();
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(Error::NotUnimodular {
                deviation: (det - C64::new(1.0, 0.0)).norm(),
            });
        }
        let root = det.sqrt();
        let correction = (root - C64::new(1.0, 0.0)).norm();
        Ok((SL2Element(m / root), correction))
    }

    pub fn identity() -> Self {
        SL2Element(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.determinant()
    }

    /// The inverse [[d, −b], [−c, a]], exact for unimodular matrices.
    pub fn inverse(&self) -> Self {
        let m = &self.0;
        SL2Element(Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]))
    }

    /// α* (conjugate transpose). Not itself a group operation.
    pub fn adjoint(&self) -> Matrix2<C64> {
        self.0.adjoint()
    }

    /// exp(M) for a traceless 2×2 matrix M, via
    /// exp(M) = cosh(s)·1 + sinh(s)/s·M with s² = −det M.
    pub fn exp_traceless(m: Matrix2<C64>) -> Self {
        let s = (-m.determinant()).sqrt();
        let sinhc = if s.norm() < 1e-8 {
            // series of sinh(s)/s
            C64::new(1.0, 0.0) + s * s / 6.0
        } else {
            s.sinh() / s
        };
        SL2Element(Matrix2::identity() * s.cosh() + m * sinhc)
    }

    /// The spinor whose Lorentz matrix V rotates the k-th spatial axis frame:
    /// exp(−iθσₖ/2). V(rotation(k, θ)) is the rotation by θ about axis k.
    pub fn rotation(axis: usize, angle: f64) -> Self {
        assert!((1..=3).contains(&axis), "rotation axis must be 1, 2 or 3");
        Self::exp_traceless(pauli(axis) * C64::new(0.0, -angle / 2.0))
    }

    /// exp(λσₖ/2). V(boost(k, λ)) maps the time axis to cosh λ e₀ + sinh λ eₖ.
    pub fn boost(axis: usize, rapidity: f64) -> Self {
        assert!((1..=3).contains(&axis), "boost axis must be 1, 2 or 3");
        Self::exp_traceless(pauli(axis) * C64::new(rapidity / 2.0, 0.0))
    }

    /// α₀₃(λ): the boost whose momentum action Λ(α₀₃) sends p⁰ to
    /// p⁰cosh λ + p³sinh λ.
    pub fn alpha_03(rapidity: f64) -> Self {
        Self::boost(3, -rapidity)
    }

    /// α₁₂(θ): rotation in the 1–2 plane (about the third axis).
    pub fn alpha_12(angle: f64) -> Self {
        Self::rotation(3, angle)
    }

    /// α₂₃(θ): rotation in the 2–3 plane, with V(α₂₃) taking e₂ to cos θ e₂ + sin θ e₃.
    pub fn alpha_23(angle: f64) -> Self {
        Self::rotation(1, angle)
    }

    /// α₁₃(θ): rotation in the 1–3 plane, with V(α₁₃) taking e₁ to cos θ e₁ + sin θ e₃.
    pub fn alpha_13(angle: f64) -> Self {
        Self::rotation(2, -angle)
    }
}

impl Mul for SL2Element {
    type Output = SL2Element;
    fn mul(self, rhs: SL2Element) -> SL2Element {
        SL2Element(self.0 * rhs.0)
    }
}

impl Mul<&SL2Element> for &SL2Element {
    type Output = SL2Element;
    fn mul(self, rhs: &SL2Element) -> SL2Element {
        SL2Element(self.0 * rhs.0)
    }
}

impl Neg for SL2Element {
    type Output = SL2Element;
    fn neg(self) -> SL2Element {
        SL2Element(-self.0)
    }
}

/// The stabilizer of p̄ = (1,0,0,1): [[e^{iφ/2}, e^{iφ/2}z], [0, e^{−iφ/2}]].
///
/// φ ranges over [0, 4π); φ = 2π gives −1, the nontrivial element of the
/// kernel of the covering map.
pub fn little_group_element(z: C64, phi: f64) -> SL2Element {
    let h = C64::from_polar(1.0, phi / 2.0);
    SL2Element(Matrix2::new(h, h * z, C64::new(0.0, 0.0), h.conj()))
}

/// The standard point p̄ = (1,0,0,1) of the cone.
pub const STANDARD_MOMENTUM: FourVector = FourVector::new(1.0, 0.0, 0.0, 1.0);

/// True iff ‖γ p̄̂ γ* − p̄̂‖∞ ≤ tol, i.e. γ fixes p̄ = (1,0,0,1).
pub fn in_little_group(gamma: &SL2Element, tol: f64) -> bool {
    little_group_residual(gamma) <= tol
}

/// ‖γ p̄̂ γ* − p̄̂‖∞ (largest entry modulus).
pub fn little_group_residual(gamma: &SL2Element) -> f64 {
    let pbar = pauli_embed(&STANDARD_MOMENTUM);
    let moved = gamma.matrix() * pbar * gamma.adjoint();
    crate::max_abs_c(&(moved - pbar))
}

/// The intertwiner between ℂ²⊗ℂ² and Minkowski coordinates, scaled by 1/2 so
/// that it is unitary: rows (1,0,0,1), (0,1,1,0), (0,i,−i,0), (1,0,0,−1) over √2.
pub fn intertwiner() -> Matrix4<C64> {
    let r = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, FRAC_1_SQRT_2);
    let o = C64::new(0.0, 0.0);
    Matrix4::new(r, o, o, r, o, r, r, o, o, i, -i, o, r, o, o, -r)
}

fn kron_with_conjugate(alpha: &SL2Element) -> Matrix4<C64> {
    let a = alpha.matrix();
    Matrix4::from_fn(|row, col| {
        let (i, j) = (row / 2, row % 2);
        let (k, l) = (col / 2, col % 2);
        a[(i, k)] * a[(j, l)].conj()
    })
}

/// A proper orthochronous Lorentz matrix acting on column four-vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

/// The Minkowski metric g = diag(1, −1, −1, −1).
pub fn minkowski_metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Wraps an arbitrary real matrix; use [`Self::metric_residual`] to check it.
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        LorentzMatrix(m)
    }

    /// Λ⁻¹ = g Λᵀ g, exact up to rounding for Lorentz matrices.
    pub fn inverse(&self) -> Self {
        let g = minkowski_metric();
        LorentzMatrix(g * self.0.transpose() * g)
    }

    pub fn apply(&self, p: &FourVector) -> FourVector {
        FourVector::from_vector(&(self.0 * p.to_vector()))
    }

    pub fn apply_c(&self, v: &crate::C4) -> crate::C4 {
        let m = self.0.map(|x| C64::new(x, 0.0));
        m * v
    }

    /// ‖ΛᵀgΛ − g‖∞.
    pub fn metric_residual(&self) -> f64 {
        let g = minkowski_metric();
        crate::max_abs(&(self.0.transpose() * g * self.0 - g))
    }

    pub fn is_proper_orthochronous(&self, tol: f64) -> bool {
        self.metric_residual() <= tol && (self.0.determinant() - 1.0).abs() <= tol && self.0[(0, 0)] >= 1.0 - tol
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;
    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * rhs.0)
    }
}

/// V(α) = S(α ⊗ ᾱ)S⁻¹, the image of α in the proper orthochronous Lorentz group.
///
/// V(α)p is the four-vector whose Pauli matrix is α p̂ α*.
pub fn lorentz_of(alpha: &SL2Element) -> LorentzMatrix {
    let s = intertwiner();
    let v = s * kron_with_conjugate(alpha) * s.adjoint();
    LorentzMatrix(v.map(|z| z.re))
}

/// Same as [`lorentz_of`] but with the intertwiner rescaled by `scale` and
/// inverted numerically, i.e. computed from cS instead of S. The result does
/// not depend on c.
pub fn lorentz_of_scaled(alpha: &SL2Element, scale: C64) -> Option<Matrix4<C64>> {
    let s = intertwiner() * scale;
    let s_inv = s.try_inverse()?;
    Some(s * kron_with_conjugate(alpha) * s_inv)
}

/// Imaginary residue of S(α⊗ᾱ)S⁻¹, zero up to rounding.
pub fn lorentz_imaginary_part(alpha: &SL2Element) -> f64 {
    let s = intertwiner();
    let v = s * kron_with_conjugate(alpha) * s.adjoint();
    v.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
}

/// The fixed fundamental symmetry J = diag(−1, 1, 1, 1) on ℂ⁴.
///
/// The Krein pairing ⟨u, Jv⟩ is minus the Minkowski pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct KreinMetric;

impl KreinMetric {
    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
    }

    pub fn apply(&self, v: &crate::C4) -> crate::C4 {
        let mut w = *v;
        w[0] = -w[0];
        w
    }
}
