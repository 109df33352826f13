use thiserror::Error;

/// Everything that can go wrong when building or evaluating the objects of
/// this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not unimodular: |det - 1| = {deviation:.3e}")]
    NotUnimodular { deviation: f64 },

    #[error("radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),

    #[error("point is not on the forward light cone: {0}")]
    NotOnCone(String),

    /// The requested object has a genuine coordinate singularity at this point
    /// (the transversal frame on the polar axis, or the apex of the cone).
    #[error("degenerate coordinates: {0}")]
    DegenerateCoordinates(String),

    #[error("invalid packet: {0}")]
    InvalidPacket(String),

    /// A quadrature or grid is too coarse (or too small) for the requested
    /// accuracy. Only raised when strict accuracy checking is enabled.
    #[error("accuracy: {0}")]
    Accuracy(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
