//! Ball-complement domains in the projective plane, their duals, and
//! boundary contours on parametrized curves.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::polyalg::RatFn;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("domain radius must be positive and delta non-negative (radius {radius}, delta {delta})")]
    InvalidDomain { radius: f64, delta: f64 },
    #[error("point lies in the compact complement G, not in D")]
    NotInDomain,
    #[error("expected {expected} homogeneous coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the curve does not meet the sphere |u| = {radius}")]
    EmptyCycle { radius: f64 },
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("cycle resolution {0} is below the minimum of 64")]
    ResolutionTooLow(usize),
}

/// Where a projective point sits relative to `D = ℂP^n \ G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    InD,
    InG,
    OnBoundary,
}

/// Complement of the closed ball `|u| ≤ r + δ` in the chart `z_0 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainSpec {
    n: usize,
    radius: f64,
    delta: f64,
}

impl DomainSpec {
    pub fn new(n: usize, radius: f64, delta: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) || !(delta >= 0.0 && delta.is_finite()) {
            return Err(GeometryError::InvalidDomain { radius, delta });
        }
        Ok(DomainSpec { n, radius, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `r + δ`, the radius of the ball actually removed.
    pub fn effective_radius(&self) -> f64 {
        self.radius + self.delta
    }

    /// Shrinks the domain by a further `δ`; exhaustions compose additively.
    pub fn exhaust(&self, delta: f64) -> Result<Self, GeometryError> {
        DomainSpec::new(self.n, self.radius, self.delta + delta)
    }

    fn check_len(&self, z: &[Complex64]) -> Result<(), GeometryError> {
        if z.len() != self.n + 1 {
            return Err(GeometryError::DimensionMismatch {
                expected: self.n + 1,
                found: z.len(),
            });
        }
        Ok(())
    }

    pub fn contains(&self, z: &[Complex64]) -> Result<Location, GeometryError> {
        self.check_len(z)?;
        if z[0] == Complex64::new(0.0, 0.0) {
            return Ok(Location::InD);
        }
        let norm = affine_norm(z);
        let r = self.effective_radius();
        let tol = 1e-12 * r;
        Ok(if norm > r + tol {
            Location::InD
        } else if norm < r - tol {
            Location::InG
        } else {
            Location::OnBoundary
        })
    }

    /// Whether the hyperplane `⟨ξ·z⟩ = 0` misses the closed ball.
    pub fn dual_contains(&self, xi: &[Complex64]) -> Result<bool, GeometryError> {
        self.check_len(xi)?;
        Ok(xi[0].norm() > self.effective_radius() * tail_norm(xi))
    }

    /// Margin `|ξ_0| / ((r+δ)‖ξ'‖)`; above 1 exactly on the dual domain.
    pub fn dual_margin(&self, xi: &[Complex64]) -> f64 {
        xi[0].norm() / (self.effective_radius() * tail_norm(xi))
    }

    /// Hyperplane through `z` that avoids `G`: `(−|u|², ū)`, and `(1, 0, …)` at
    /// infinity, which is the limit of the normalized affine formula.
    pub fn eta_map(&self, z: &[Complex64]) -> Result<Vec<Complex64>, GeometryError> {
        match self.contains(z)? {
            Location::InD => {}
            _ => return Err(GeometryError::NotInDomain),
        }
        if z[0] == Complex64::new(0.0, 0.0) {
            let mut eta = vec![Complex64::new(0.0, 0.0); self.n + 1];
            eta[0] = Complex64::new(1.0, 0.0);
            return Ok(eta);
        }
        Ok(eta_affine(&affine(z)))
    }
}

/// `η(u) = (−|u|², ū_1, …, ū_n)` for an affine point.
pub fn eta_affine(u: &[Complex64]) -> Vec<Complex64> {
    let norm_sqr: f64 = u.iter().map(|v| v.norm_sqr()).sum();
    std::iter::once(Complex64::new(-norm_sqr, 0.0))
        .chain(u.iter().map(|v| v.conj()))
        .collect()
}

/// Affine coordinates `z_k / z_0`.
pub fn affine(z: &[Complex64]) -> Vec<Complex64> {
    z[1..].iter().map(|v| v / z[0]).collect()
}

fn affine_norm(z: &[Complex64]) -> f64 {
    z[1..].iter().map(|v| (v / z[0]).norm_sqr()).sum::<f64>().sqrt()
}

fn tail_norm(xi: &[Complex64]) -> f64 {
    xi[1..].iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Rational parametrization of a curve in `ℂP^n`.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveParam {
    /// `s ↦ (s^{p_0}, …, s^{p_n})`, optionally restricted to `|s| ≤ s_max`.
    MonomialCurve { powers: Vec<u32>, s_max: Option<f64> },
}

impl CurveParam {
    pub fn monomial(powers: Vec<u32>) -> Self {
        CurveParam::MonomialCurve {
            powers,
            s_max: None,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CurveParam::MonomialCurve { powers, .. } => powers.len() - 1,
        }
    }

    pub fn powers(&self) -> &[u32] {
        match self {
            CurveParam::MonomialCurve { powers, .. } => powers,
        }
    }

    /// Homogeneous point `z(s)`.
    pub fn point(&self, s: Complex64) -> Vec<Complex64> {
        self.powers().iter().map(|&p| s.powu(p)).collect()
    }

    /// Affine exponents `p_k − p_0`.
    fn affine_exponents(&self) -> Vec<i32> {
        let p = self.powers();
        p[1..].iter().map(|&e| e as i32 - p[0] as i32).collect()
    }

    /// Affine point `u(s)`.
    pub fn affine_point(&self, s: Complex64) -> Vec<Complex64> {
        self.affine_exponents().iter().map(|&e| s.powi(e)).collect()
    }

    /// `du/ds`.
    pub fn affine_velocity(&self, s: Complex64) -> Vec<Complex64> {
        self.affine_exponents()
            .iter()
            .map(|&e| if e == 0 { Complex64::new(0.0, 0.0) } else { s.powi(e - 1) * e as f64 })
            .collect()
    }

    /// `u_k(s)` as rational functions of `s`.
    pub fn affine_ratfns(&self) -> Vec<RatFn> {
        self.affine_exponents()
            .iter()
            .map(|&e| RatFn::power_of_s(e))
            .collect()
    }

    /// `|u(s)|` for `|s| = rho`; monomial curves are radially symmetric.
    pub fn radial_norm(&self, rho: f64) -> f64 {
        self.affine_exponents()
            .iter()
            .map(|&e| rho.powi(2 * e))
            .sum::<f64>()
            .sqrt()
    }

    fn s_max(&self) -> Option<f64> {
        match self {
            CurveParam::MonomialCurve { s_max, .. } => *s_max,
        }
    }
}

/// Closed, discretized circle in the parameter plane with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    center: Complex64,
    radius: f64,
    orientation: i8,
    /// `M + 1` nodes, the last repeating the first.
    nodes: Vec<Complex64>,
    /// `ds` increments, one per distinct node.
    weights: Vec<Complex64>,
}

impl Cycle {
    /// `M` equispaced nodes; `orientation = 1` runs counterclockwise.
    pub fn circle(center: Complex64, radius: f64, m: usize, orientation: i8) -> Self {
        let sign = if orientation >= 0 { 1.0 } else { -1.0 };
        let mut nodes = Vec::with_capacity(m + 1);
        let mut weights = Vec::with_capacity(m);
        for i in 0..m {
            let offset = Complex64::from_polar(radius, sign * 2.0 * PI * i as f64 / m as f64);
            nodes.push(center + offset);
            weights.push(Complex64::new(0.0, sign) * offset * (2.0 * PI / m as f64));
        }
        nodes.push(nodes[0]);
        Cycle {
            center,
            radius,
            orientation: sign as i8,
            nodes,
            weights,
        }
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    /// Distinct nodes (without the closing repeat).
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes[..self.weights.len()]
    }

    pub fn closed_nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn resolution(&self) -> usize {
        self.weights.len()
    }

    /// Trapezoid approximation of `∮ f(s) ds`, summed in node order.
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        self.nodes()
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| f(*s) * w)
            .sum()
    }

    /// Euclidean distance from `p` to the circle.
    pub fn distance(&self, p: Complex64) -> f64 {
        ((p - self.center).norm() - self.radius).abs()
    }

    /// Total change of `arg(s − center)` along the closed polygon.
    pub fn winding_angle(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| ((w[1] - self.center) / (w[0] - self.center)).arg())
            .sum()
    }
}

/// The contour `{|u(s)| = r + δ}` on a parametrized curve, oriented as the
/// boundary of the part of the curve lying in `D_δ` (clockwise in `s`).
pub fn boundary_cycle(dom: &DomainSpec, param: &CurveParam, m: usize) -> Result<Cycle, GeometryError> {
    if m < 64 {
        return Err(GeometryError::ResolutionTooLow(m));
    }
    if param.n() != dom.n() {
        return Err(GeometryError::DimensionMismatch {
            expected: dom.n() + 1,
            found: param.n() + 1,
        });
    }
    let exps = param.affine_exponents();
    if exps.iter().any(|&e| e < 0) || exps.iter().all(|&e| e == 0) {
        return Err(GeometryError::UnsupportedGeometry(
            "|u(s)| is not increasing in |s|".into(),
        ));
    }
    let target = dom.effective_radius();
    let mut hi = match param.s_max() {
        Some(s) => s,
        None => {
            let mut hi = 1.0;
            while param.radial_norm(hi) < target && hi < 1e8 {
                hi *= 2.0;
            }
            hi
        }
    };
    if param.radial_norm(hi) < target {
        return Err(GeometryError::EmptyCycle { radius: target });
    }
    let mut lo = 0.0;
    while hi - lo > 1e-12 * hi.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if param.radial_norm(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok(Cycle::circle(Complex64::new(0.0, 0.0), rho, m, -1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit(n: usize) -> DomainSpec {
        DomainSpec::new(n, 1.0, 0.0).unwrap()
    }

    #[test]
    fn classifies_points() {
        let d = unit(2);
        assert_eq!(d.contains(&[c(1.0), c(2.0), c(0.0)]), Ok(Location::InD));
        assert_eq!(d.contains(&[c(1.0), c(0.5), c(0.0)]), Ok(Location::InG));
        assert_eq!(d.contains(&[c(0.0), c(1.0), c(0.0)]), Ok(Location::InD));
        assert_eq!(d.contains(&[c(1.0), c(1.0), c(0.0)]), Ok(Location::OnBoundary));
    }

    #[test]
    fn dual_membership() {
        let d = unit(2);
        assert!(d.dual_contains(&[c(2.0), c(1.0), c(0.0)]).unwrap());
        assert!(!d.dual_contains(&[c(1.0), c(1.0), c(0.0)]).unwrap());
        assert!(!d.dual_contains(&[c(0.0), c(1.0), c(1.0)]).unwrap());
    }

    #[test]
    fn eta_examples() {
        let d = unit(2);
        let eta = d.eta_map(&[c(1.0), c(2.0), c(0.0)]).unwrap();
        assert_eq!(eta, vec![c(-4.0), c(2.0), c(0.0)]);
        let eta = d
            .eta_map(&[c(1.0), Complex64::new(1.0, 1.0), c(0.0)])
            .unwrap();
        assert_eq!(eta, vec![c(-2.0), Complex64::new(1.0, -1.0), c(0.0)]);
        let eta = d.eta_map(&[c(1.0), c(0.0), c(3.0)]).unwrap();
        assert_eq!(eta, vec![c(-9.0), c(0.0), c(3.0)]);
        assert!(d.dual_contains(&eta).unwrap());
        assert_eq!(
            d.eta_map(&[c(1.0), c(0.1), c(0.0)]),
            Err(GeometryError::NotInDomain)
        );
        let at_infinity = d.eta_map(&[c(0.0), c(1.0), c(2.0)]).unwrap();
        assert!(d.dual_contains(&at_infinity).unwrap());
    }

    #[test]
    fn exhaustion_nests() {
        let d = unit(2);
        let d05 = d.exhaust(0.5).unwrap();
        assert_eq!(d05.effective_radius(), 1.5);
        let p = [c(1.0), c(1.25), c(0.0)];
        assert_eq!(d.exhaust(0.1).unwrap().contains(&p), Ok(Location::InD));
        assert_eq!(d05.contains(&p), Ok(Location::InG));
    }

    #[test]
    fn conic_cycle_radius_and_orientation() {
        let cyc = boundary_cycle(&unit(2), &CurveParam::monomial(vec![0, 1, 2]), 128).unwrap();
        let rho = cyc.radius();
        assert!((rho * rho + rho.powi(4) - 1.0).abs() < 1e-11);
        assert!((rho - 0.78615).abs() < 1e-5);
        let loop_integral = cyc.integrate(|s| s.inv());
        assert!((loop_integral - Complex64::new(0.0, -2.0 * PI)).norm() < 1e-12);
        assert!((cyc.winding_angle() + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn empty_and_unsupported_cycles() {
        let dom = DomainSpec::new(2, 10.0, 0.0).unwrap();
        let restricted = CurveParam::MonomialCurve {
            powers: vec![0, 1, 2],
            s_max: Some(1.0),
        };
        assert!(matches!(
            boundary_cycle(&dom, &restricted, 64),
            Err(GeometryError::EmptyCycle { .. })
        ));
        let odd = CurveParam::monomial(vec![1, 0, 2]);
        assert!(matches!(
            boundary_cycle(&unit(2), &odd, 64),
            Err(GeometryError::UnsupportedGeometry(_))
        ));
        assert!(matches!(
            boundary_cycle(&unit(2), &CurveParam::monomial(vec![0, 1, 2]), 32),
            Err(GeometryError::ResolutionTooLow(32))
        ));
    }
}
