//! Residue currents: tube limits, algebraic point residues, Leray densities
//! on parametrized curves, and the residue pairing.
//!
//! Every residue here carries the `(2πi)^{-m}` normalization, so iterated
//! Cauchy coefficients come out as plain numbers.

mod grothendieck;
mod leray;
mod shape;
mod transformation;
mod tube;
mod variety;

pub use grothendieck::grothendieck_residue;
pub use leray::{fibered_residue, leray_residue_density, residue_pairing, PairingNodes};
pub use shape::{permutation_sign, TriangularForm};
pub use transformation::{determinant, transformation_law_check, TransformationReport};
pub use tube::{tube_integral, TubeOutcome, TubeRegion};
pub use variety::{
    AdmissibleSchedule, FormRepr, LocalChart, ResidualFormSpec, Transition, VarietySpec,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::ExprError;
use crate::geometry::GeometryError;
use crate::polyalg::PolyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidueError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid variety: {0}")]
    InvalidVariety(String),
    #[error("weight {found} does not match the dualizing weight {expected}")]
    WeightMismatch { expected: i32, found: i32 },
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("tube limit did not stabilize: last two values {previous} and {last}")]
    NotStabilized {
        previous: Complex64,
        last: Complex64,
    },
    #[error("torus quadrature did not converge at {nodes} nodes per circle")]
    QuadratureNotConverged { nodes: usize },
    #[error("tube leaves the evaluation region: {0}")]
    TubeEscapes(String),
    #[error("unsupported basis: {0}")]
    UnsupportedBasis(String),
    #[error("the point is not a common zero of the generators")]
    NotAZero,
    #[error("branch point of the fibration near base point {at}")]
    BranchPoint { at: Complex64 },
    #[error("cycle passes through a singular point of the curve near s = {at}")]
    SingularCycle { at: Complex64 },
    #[error("density has a pole on the cycle near s = {at}")]
    PoleOnCycle { at: Complex64 },
    #[error("transition matrix is degenerate at the evaluation point")]
    DegenerateTransition,
}

pub(crate) const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
