//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation (non-positive
    /// dimension, chord length beyond [0, 2], zero tolerance, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested construction does not exist at this size (e.g. an
    /// anisotropic lattice whose row count would round to zero).
    #[error("construction too small: {0}")]
    ConstructionTooSmall(String),

    /// Two disk centers coincide (within 1e-12), so Voronoi cells are ill-defined.
    #[error("degenerate sites: centers {0} and {1} coincide")]
    DegenerateSites(usize, usize),

    /// The polygon handed to `ConvexPolygon::new` is not strictly convex after
    /// collinear-vertex merging, or has fewer than three distinct vertices.
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    /// The Voronoi net failed a structural identity it must satisfy.
    #[error("net topology error: {0}")]
    Topology(String),

    /// A numeric routine could not reach its contract (no sign change for
    /// bisection, unbounded growth, argument outside guard tolerances).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A randomized search was asked to start from an uncoverable state.
    #[error("infeasible start: {0}")]
    InfeasibleStart(String),
}

pub type Result<T> = std::result::Result<T, Error>;
