//! Residuals of constant-coefficient systems `P_k(∂/∂ξ) g = 0` at sample
//! points, from Cauchy derivatives of a sampled `g`.

use num_complex::Complex64;
use serde::Serialize;

use super::TransformError;
use crate::geometry::DomainSpec;
use crate::polyalg::{cauchy_derivative, default_radii, DiscStencil, HomPoly};

const STENCIL_NODES: usize = 16;
const MAX_SHRINKS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    /// No stencil small enough to stay in the dual domain was found.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemReport {
    pub point: Vec<Complex64>,
    /// `P_k(∂) g` at the point, one entry per equation.
    pub residuals: Vec<Complex64>,
    /// `|P_k(∂) g| / scale`.
    pub relative: Vec<f64>,
    /// Largest of `|c_α ∂^α g|` over all monomials and `|∂_j g|` over all
    /// coordinates. The gradient term keeps the ratio meaningful when every
    /// leading derivative vanishes identically.
    pub scale: f64,
    pub status: PointStatus,
}

/// Evaluates each `P_k(∂/∂ξ) g` at every test point.
///
/// Each monomial gets its own polydisc stencil over the coordinates it
/// actually differentiates, radii `0.1|ξ_i|` (floor 0.05) halved until every
/// node lies in the dual domain of `dom`.
pub fn verify_system(
    g: &dyn Fn(&[Complex64]) -> Result<Complex64, TransformError>,
    system: &[HomPoly],
    points: &[Vec<Complex64>],
    dom: &DomainSpec,
) -> Result<Vec<SystemReport>, TransformError> {
    points.iter().map(|xi| verify_point(g, system, xi, dom)).collect()
}

fn verify_point(
    g: &dyn Fn(&[Complex64]) -> Result<Complex64, TransformError>,
    system: &[HomPoly],
    xi: &[Complex64],
    dom: &DomainSpec,
) -> Result<SystemReport, TransformError> {
    let skipped = || SystemReport {
        point: xi.to_vec(),
        residuals: Vec::new(),
        relative: Vec::new(),
        scale: 0.0,
        status: PointStatus::Skipped,
    };
    let mut scale = 0.0_f64;
    for j in 0..xi.len() {
        let order = {
            let mut o = vec![0u32; xi.len()];
            o[j] = 1;
            o
        };
        match derivative(g, xi, &order, dom)? {
            Some(d) => scale = scale.max(d.norm()),
            None => return Ok(skipped()),
        }
    }
    let mut residuals = Vec::with_capacity(system.len());
    for p in system {
        let mut total = Complex64::new(0.0, 0.0);
        for (alpha, c) in p.poly().terms() {
            let Some(d) = derivative(g, xi, alpha.exponents(), dom)? else {
                return Ok(skipped());
            };
            let term = c * d;
            scale = scale.max(term.norm());
            total += term;
        }
        residuals.push(total);
    }
    let relative = residuals
        .iter()
        .map(|r| if scale > 0.0 { r.norm() / scale } else { r.norm() })
        .collect();
    Ok(SystemReport {
        point: xi.to_vec(),
        residuals,
        relative,
        scale,
        status: PointStatus::Ok,
    })
}

/// `∂^α g(ξ)` over the support axes of `α`; `None` if no stencil fits.
fn derivative(
    g: &dyn Fn(&[Complex64]) -> Result<Complex64, TransformError>,
    xi: &[Complex64],
    alpha: &[u32],
    dom: &DomainSpec,
) -> Result<Option<Complex64>, TransformError> {
    let axes: Vec<usize> = (0..xi.len()).filter(|&i| alpha[i] > 0).collect();
    if axes.is_empty() {
        return Ok(Some(g(xi)?));
    }
    let center: Vec<Complex64> = axes.iter().map(|&i| xi[i]).collect();
    let order: Vec<u32> = axes.iter().map(|&i| alpha[i]).collect();
    let mut radii = default_radii(&center);
    let embed = |local: &[Complex64]| -> Vec<Complex64> {
        let mut full = xi.to_vec();
        for (k, &i) in axes.iter().enumerate() {
            full[i] = local[k];
        }
        full
    };
    for _ in 0..=MAX_SHRINKS {
        let inside = DiscStencil::node_points(&center, &radii, STENCIL_NODES)
            .iter()
            .all(|p| dom.dual_contains(&embed(p)).unwrap_or(false));
        if inside {
            let stencil = DiscStencil::try_sample(&center, &radii, STENCIL_NODES, |p| g(&embed(p)))?;
            return Ok(Some(cauchy_derivative(&stencil, &order)?));
        }
        radii.iter_mut().for_each(|r| *r *= 0.5);
    }
    Ok(None)
}
