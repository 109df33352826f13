//! Krein-space machinery for the single photon.
//!
//! The crate implements the four-vector representation of the Poincaré group
//! (double cover) on the forward light cone, in which boosts act by ordinary
//! Lorentz matrices on a ℂ⁴-valued momentum wave function and the invariant
//! form is the *indefinite* Minkowski pairing. Around it sit the pieces needed
//! to see how the physical, positive-norm photon emerges:
//!
//! * [`sl2c`]: SL(2,ℂ), the Pauli embedding and the covering map onto
//!   proper orthochronous Lorentz matrices.
//! * [`cone`]: light-cone coordinates, the boost section β(p), the Wigner
//!   element γ(α,p) and the invariant measure.
//! * [`krein`]: the pointwise geometry B(p), √B(p), the polarization frame and
//!   the fiber fundamental symmetry J′ₚ.
//! * [`rep`]: wave functions as expression trees and the local, conjugate and
//!   induced actions together with the intertwiner between them.
//! * [`transversal`]: the transversal subspace, the phase Θ(α,p) of the
//!   generated unitary representation and its helicity ±1 form.
//! * [`field`]: quadrature on the cone, inner products, the Fourier transform
//!   to position space and the position-space Krein product.
//! * [`packet`] and [`verify`]: the JSON packet format and the seeded
//!   verification suites used by the command-line tool.
//!
//! ```
//! use krein_photon::{cone::ConePoint, krein};
//!
//! let p = ConePoint::from_spatial([0.0, 0.0, 2.0]).unwrap();
//! let b = krein::gram(&p);
//! let mut eig: Vec<f64> = b.symmetric_eigenvalues().iter().copied().collect();
//! eig.sort_by(f64::total_cmp);
//! assert!((eig[0] - 0.25).abs() < 1e-12);
//! assert!((eig[3] - 4.0).abs() < 1e-12);
//! ```

pub mod cone;
pub mod error;
pub mod field;
pub mod krein;
pub mod packet;
pub mod rep;
pub mod sl2c;
pub mod transversal;
pub mod verify;

pub use error::{Error, Result};

/// Double-precision complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// A vector in ℂ⁴, the fiber of the wave functions.
pub type C4 = nalgebra::Vector4<C64>;

/// Largest absolute entry of a real matrix, the residual norm used by every
/// identity check in the crate.
pub fn max_abs<R, C, S>(m: &nalgebra::Matrix<f64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<f64, R, C>,
{
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest modulus among the entries of a complex matrix.
pub fn max_abs_c<R, C, S>(m: &nalgebra::Matrix<C64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<C64, R, C>,
{
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.norm()))
}
