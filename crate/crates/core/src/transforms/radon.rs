//! Radon transform of a residual current on a parametrized curve, evaluated
//! on the boundary cycle of the exhausted domain.

use num_complex::Complex64;

use super::{Covector1Form, OneFormField, TransformError};
use crate::geometry::{boundary_cycle, Cycle, DomainSpec};
use crate::polyalg::UniPoly;
use crate::residues::{PairingNodes, ResidualFormSpec, VarietySpec, TWO_PI_I};

pub const DEFAULT_CYCLE_NODES: usize = 256;

/// Roots of `⟨ξ·z(s)⟩` closer than this to the cycle make `ξ` near-incident.
const CYCLE_CLEARANCE: f64 = 1e-6;
/// Squared relative separation under which two section points count as merged.
const MERGED_SECTION: f64 = 1e-10;

/// Precomputed cycle and density for repeated Radon evaluations.
#[derive(Debug, Clone)]
pub struct RadonEvaluator {
    dom: DomainSpec,
    powers: Vec<u32>,
    cycle: Cycle,
    nodes: PairingNodes,
}

impl RadonEvaluator {
    pub fn new(
        v: &VarietySpec,
        form: &ResidualFormSpec,
        dom: &DomainSpec,
        cycle_nodes: usize,
    ) -> Result<Self, TransformError> {
        let param = v.param().ok_or_else(|| {
            TransformError::Unsupported("the Radon pipeline needs a parametrized curve".into())
        })?;
        if v.m() != 1 {
            return Err(TransformError::Unsupported(
                "the Radon pipeline handles curves in the plane only".into(),
            ));
        }
        let cycle = boundary_cycle(dom, param, cycle_nodes)?;
        let nodes = PairingNodes::new(v, form, &cycle)?;
        Ok(RadonEvaluator {
            dom: *dom,
            powers: param.powers().to_vec(),
            cycle,
            nodes,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.dom
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    /// Rejects `ξ` whose hyperplane section of the curve comes too close to
    /// the cycle or degenerates.
    pub fn check_incidence(&self, xi: &[Complex64]) -> Result<(), TransformError> {
        let deg = *self.powers.iter().max().expect("non-empty") as usize;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (x, &p) in xi.iter().zip(&self.powers) {
            coeffs[p as usize] += x;
        }
        let q = UniPoly::new(coeffs);
        if q.is_zero() {
            return Err(TransformError::NearIncidence(
                "the hyperplane contains the curve".into(),
            ));
        }
        let roots = q.roots()?;
        for r in &roots {
            if self.cycle.distance(*r) < CYCLE_CLEARANCE {
                return Err(TransformError::NearIncidence(format!(
                    "section point s = {r} lies on the integration cycle"
                )));
            }
        }
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
                if (roots[i] - roots[j]).norm_sqr() < MERGED_SECTION * scale * scale {
                    return Err(TransformError::NearIncidence(format!(
                        "section points merge near s = {}",
                        roots[i]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, xi: &[Complex64]) -> Result<Covector1Form, TransformError> {
        if xi.len() != self.powers.len() {
            return Err(TransformError::Geometry(
                crate::geometry::GeometryError::DimensionMismatch {
                    expected: self.powers.len(),
                    found: xi.len(),
                },
            ));
        }
        if !self.dom.dual_contains(xi)? {
            return Err(TransformError::NotInDualDomain(xi.to_vec()));
        }
        self.check_incidence(xi)?;
        Ok(Covector1Form::new(xi.to_vec(), self.components_unchecked(xi)))
    }

    /// Transform components without the domain and incidence checks; used on
    /// quadrature paths already known to stay inside the dual domain.
    pub fn components_unchecked(&self, xi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); xi.len()];
        for (z, w) in self.nodes.points().iter().zip(self.nodes.weights()) {
            let pairing: Complex64 = xi.iter().zip(z).map(|(a, b)| a * b).sum();
            let factor = w / pairing;
            for (o, zj) in out.iter_mut().zip(z) {
                *o += zj * factor;
            }
        }
        out.iter().map(|v| v / TWO_PI_I).collect()
    }
}

impl OneFormField for RadonEvaluator {
    fn covector(&self, xi: &[Complex64]) -> Result<Covector1Form, TransformError> {
        self.eval(xi)
    }
}

/// `R_V[φ](ξ)` on the cycle of `dom` (whose `δ` sets the exhaustion).
pub fn radon_transform(
    v: &VarietySpec,
    form: &ResidualFormSpec,
    dom: &DomainSpec,
    xi: &[Complex64],
    cycle_nodes: usize,
) -> Result<Covector1Form, TransformError> {
    RadonEvaluator::new(v, form, dom, cycle_nodes)?.eval(xi)
}
