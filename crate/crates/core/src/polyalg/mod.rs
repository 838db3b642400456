//! Polynomial arithmetic and numerical differentiation.

mod cauchy;
mod poly;
mod univariate;

pub use cauchy::{cauchy_derivative, default_radii, homogeneity_of, DiscStencil};
pub use poly::{HomPoly, MultiIndex, Poly, TermLiteral};
pub use univariate::{RatFn, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("term {term:?} has degree {found}, expected {expected}")]
    DegreeMismatch {
        term: Vec<u32>,
        expected: u32,
        found: u32,
    },
    #[error("polynomial literal has no terms")]
    EmptyLiteral,
    #[error("series has zero constant term and cannot be inverted")]
    NotAUnit,
    #[error("stencil has {found} samples, expected {expected}")]
    IncompleteStencil { expected: usize, found: usize },
    #[error("stencil needs an even node count of at least 8, got {0}")]
    BadNodeCount(usize),
    #[error("derivative order {order} needs fewer than {limit} per variable")]
    OrderTooHigh { order: u32, limit: usize },
    #[error("function is not homogeneous at the probe points")]
    NotHomogeneous,
    #[error("root finder did not converge")]
    RootsNotConverged,
}
