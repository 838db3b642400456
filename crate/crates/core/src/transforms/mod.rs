//! Radon and Fantappiè transforms, Martineau inversion, and the PDE checks.
//!
//! Normalization: with `μ(h) = (2πi)^{-1} ∮ h J ds` the normalized residue
//! pairing of a curve (`m = 1`), the Radon transform is
//! `R_j(ξ) = (2πi)^{-1} μ(z_j / ⟨ξ·z⟩)`, while the boundary-residue functional
//! used by the Fantappiè transform is the un-normalized `(2πi)^m μ`. With
//! these choices `(2πi)^{m+1} R = F[(2πi)^m μ]` holds exactly.

mod fantappie;
mod martineau;
mod radon;
mod system;

pub use fantappie::{dual_path, fantappie_potential, fantappie_transform, potential, FunctionalSpec};
pub use martineau::{martineau_invert, MartineauFunctional, MartineauOptions};
pub use radon::{radon_transform, RadonEvaluator, DEFAULT_CYCLE_NODES};
pub use system::{verify_system, PointStatus, SystemReport};

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::polyalg::PolyError;
use crate::residues::ResidueError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("ξ = {0:?} is outside the dual domain")]
    NotInDualDomain(Vec<Complex64>),
    #[error("near incidence: {0}")]
    NearIncidence(String),
    #[error("kernel pole: ⟨ξ·z⟩ = 0")]
    KernelPole,
    #[error("integration path leaves the dual domain")]
    PathLeavesDomain,
    #[error("function is not homogeneous of degree 0")]
    NotHomogeneous,
    #[error("sphere quadrature not converged: refinement changed the value by {change:.3e} (mass {mass:.3e})")]
    NotConverged { change: f64, mass: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// `Σ f_j dξ_j` at the point `ξ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Covector1Form {
    pub xi: Vec<Complex64>,
    pub components: Vec<Complex64>,
}

impl Covector1Form {
    pub fn new(xi: Vec<Complex64>, components: Vec<Complex64>) -> Self {
        Covector1Form { xi, components }
    }

    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Covector1Form {
        Covector1Form {
            xi: self.xi.clone(),
            components: self.components.iter().map(|v| v * c).collect(),
        }
    }
}

/// Anything that produces a holomorphic 1-form on the dual domain.
pub trait OneFormField: Sync {
    fn covector(&self, xi: &[Complex64]) -> Result<Covector1Form, TransformError>;
}

/// `Σ_j ξ_j f_j(ξ)`; equals `μ(1)` when `f` is the Fantappiè transform of `μ`.
pub fn euler_contraction(f: &Covector1Form) -> Complex64 {
    f.xi.iter().zip(&f.components).map(|(x, c)| x * c).sum()
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub(crate) fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("positive rule size"));
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let total: f64 = gauss_legendre(8, 0.0, 2.0)
            .iter()
            .map(|(x, w)| w * x.powi(5))
            .sum();
        assert!((total - 64.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn euler_contraction_of_point_mass_kernel() {
        let xi = vec![Complex64::new(1.0, 0.0), Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0)];
        let z = [Complex64::new(1.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.2)];
        let pairing: Complex64 = xi.iter().zip(&z).map(|(a, b)| a * b).sum();
        let f = Covector1Form::new(xi, z.iter().map(|v| v / pairing).collect());
        assert!((euler_contraction(&f) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
