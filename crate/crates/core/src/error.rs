//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by curve construction, solving and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A frame vector is too short (or too far from orthonormal) to repair.
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),

    /// Two fields or developments do not share a domain, or an evaluation
    /// point lies outside the field's domain.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A rearrangement variant was applied to the wrong apparatus kind.
    #[error("wrong apparatus kind: {0}")]
    WrongApparatusKind(String),

    /// Too few grid nodes for the requested operation.
    #[error("grid too small: need at least {need} nodes, got {got}")]
    GridTooSmall { need: usize, got: usize },

    /// Grids that were expected to align do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A Bishop development cannot be lifted to continuous polar coordinates.
    #[error("unliftable path: polar angle jump of {jump:.6} rad at s = {s:.6}")]
    UnliftablePath { s: f64, jump: f64 },

    /// The Lancret curvature vanishes somewhere and no polar form was given.
    #[error("vanishing Lancret curvature at s = {s:.6}")]
    VanishingLancret { s: f64 },

    /// Slope angle outside the open interval (0, pi/2).
    #[error("invalid slope angle {0} (must lie strictly inside (0, pi/2))")]
    InvalidSlope(f64),

    /// The slant-helix slope parameter m must be nonzero.
    #[error("slope parameter m must be nonzero")]
    ZeroSlopeParameter,

    /// No admissible interval for a constructed torsion contains the left
    /// domain endpoint.
    #[error("empty admissible domain for constructed torsion")]
    EmptyDomain,

    /// A quadric fit's design matrix is rank-deficient or non-finite.
    #[error("degenerate quadric fit: {0}")]
    DegenerateFit(String),

    /// Classification could not be decided (too few strongly regular nodes).
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// A closure-dependent check was requested on a non-closed run.
    #[error("curve is not closed")]
    NotClosed,

    /// Invalid solver or field configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// I/O error with path context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input spec, CSV, or JSON.
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
