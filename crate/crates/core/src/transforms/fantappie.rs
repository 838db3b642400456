//! Fantappiè transform `f_j(ξ) = μ(z_j / ⟨ξ·z⟩)` of analytic functionals and
//! its potentials.

use num_complex::Complex64;

use super::martineau::MartineauFunctional;
use super::{gauss_legendre, Covector1Form, OneFormField, TransformError};
use crate::geometry::{boundary_cycle, DomainSpec, Location};
use crate::residues::{PairingNodes, ResidualFormSpec, VarietySpec, TWO_PI_I};

const PATH_NODES: usize = 32;

/// An analytic functional on holomorphic functions near `G`.
#[derive(Debug, Clone)]
pub enum FunctionalSpec {
    /// Evaluation at a point of `G`.
    PointMass { point: Vec<Complex64> },
    /// `(2πi)^m` times the normalized residue pairing on a boundary cycle.
    BoundaryResidue { dom: DomainSpec, nodes: PairingNodes },
    /// Martineau functional of a homogeneity-0 function.
    Martineau(MartineauFunctional),
}

impl FunctionalSpec {
    pub fn point_mass(dom: &DomainSpec, point: Vec<Complex64>) -> Result<Self, TransformError> {
        match dom.contains(&point)? {
            Location::InD => Err(TransformError::Unsupported(
                "point masses must sit in the compact set G".into(),
            )),
            _ => Ok(FunctionalSpec::PointMass { point }),
        }
    }

    pub fn boundary_residue(
        v: &VarietySpec,
        form: &ResidualFormSpec,
        dom: &DomainSpec,
        cycle_nodes: usize,
    ) -> Result<Self, TransformError> {
        let param = v.param().ok_or_else(|| {
            TransformError::Unsupported("boundary residues need a parametrized curve".into())
        })?;
        let cycle = boundary_cycle(dom, param, cycle_nodes)?;
        Ok(FunctionalSpec::BoundaryResidue {
            dom: *dom,
            nodes: PairingNodes::new(v, form, &cycle)?,
        })
    }

    /// `μ(h)` for `h` given in homogeneous coordinates.
    pub fn apply(&self, h: &dyn Fn(&[Complex64]) -> Complex64) -> Result<Complex64, TransformError> {
        match self {
            FunctionalSpec::PointMass { point } => Ok(h(point)),
            FunctionalSpec::BoundaryResidue { nodes, .. } => Ok(nodes.apply(h) * TWO_PI_I),
            FunctionalSpec::Martineau(m) => m.apply(h),
        }
    }

    /// Value assigned to the potential at the start of a path: `log⟨ξ·z*⟩`
    /// (principal branch) for point masses, 0 otherwise.
    pub fn reference_value(&self, xi: &[Complex64]) -> Result<Complex64, TransformError> {
        match self {
            FunctionalSpec::PointMass { point } => {
                let pairing: Complex64 = xi.iter().zip(point).map(|(a, b)| a * b).sum();
                if pairing.re <= 0.0 {
                    return Err(TransformError::Unsupported(
                        "principal logarithm needs Re⟨ξ·z*⟩ > 0 at the reference point".into(),
                    ));
                }
                Ok(pairing.ln())
            }
            _ => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    fn check_xi(&self, xi: &[Complex64]) -> Result<(), TransformError> {
        let dom = match self {
            FunctionalSpec::PointMass { point } => {
                let pairing: Complex64 = xi.iter().zip(point).map(|(a, b)| a * b).sum();
                if pairing.norm() < 1e-300 {
                    return Err(TransformError::KernelPole);
                }
                return Ok(());
            }
            FunctionalSpec::BoundaryResidue { dom, .. } => *dom,
            FunctionalSpec::Martineau(m) => m.sphere_domain(),
        };
        if !dom.dual_contains(xi)? {
            return Err(TransformError::NotInDualDomain(xi.to_vec()));
        }
        Ok(())
    }
}

/// `F[μ](ξ) = Σ_j μ(z_j / ⟨ξ·z⟩) dξ_j`.
pub fn fantappie_transform(
    mu: &FunctionalSpec,
    xi: &[Complex64],
) -> Result<Covector1Form, TransformError> {
    mu.check_xi(xi)?;
    let components = match mu {
        FunctionalSpec::Martineau(m) => m.fantappie(xi)?,
        _ => (0..xi.len())
            .map(|j| {
                mu.apply(&|z: &[Complex64]| {
                    let pairing: Complex64 = xi.iter().zip(z).map(|(a, b)| a * b).sum();
                    z[j] / pairing
                })
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    Ok(Covector1Form::new(xi.to_vec(), components))
}

impl OneFormField for FunctionalSpec {
    fn covector(&self, xi: &[Complex64]) -> Result<Covector1Form, TransformError> {
        fantappie_transform(self, xi)
    }
}

/// `∫_path Σ f_j dξ_j` along a polyline, 32-point Gauss–Legendre per segment.
/// Every quadrature node must lie in the dual domain of `dom`.
pub fn potential(
    field: &dyn OneFormField,
    dom: &DomainSpec,
    path: &[Vec<Complex64>],
) -> Result<Complex64, TransformError> {
    let rule = gauss_legendre(PATH_NODES, 0.0, 1.0);
    let mut total = Complex64::new(0.0, 0.0);
    for seg in path.windows(2) {
        let (a, b) = (&seg[0], &seg[1]);
        if !dom.dual_contains(b)? || !dom.dual_contains(a)? {
            return Err(TransformError::PathLeavesDomain);
        }
        let dir: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        for &(t, w) in &rule {
            let xi: Vec<Complex64> = a.iter().zip(&dir).map(|(x, d)| x + d * t).collect();
            if !dom.dual_contains(&xi)? {
                return Err(TransformError::PathLeavesDomain);
            }
            let f = field.covector(&xi)?;
            let dot: Complex64 = f.components.iter().zip(&dir).map(|(c, d)| c * d).sum();
            total += dot * w;
        }
    }
    Ok(total)
}

/// Polyline from `(1, 0, …, 0)` to `ξ` inside any dual domain containing `ξ`:
/// `ξ_0` first travels along a logarithmic spiral (tail zero), then the tail
/// grows linearly at fixed `ξ_0`.
pub fn dual_path(xi: &[Complex64]) -> Vec<Vec<Complex64>> {
    const SPIRAL_SEGMENTS: usize = 16;
    let zero = Complex64::new(0.0, 0.0);
    let (log_r, theta) = (xi[0].norm().ln(), xi[0].arg());
    let mut path: Vec<Vec<Complex64>> = (0..=SPIRAL_SEGMENTS)
        .map(|k| {
            let t = k as f64 / SPIRAL_SEGMENTS as f64;
            let mut p = vec![zero; xi.len()];
            p[0] = Complex64::from_polar((t * log_r).exp(), t * theta);
            p
        })
        .collect();
    if xi[1..].iter().any(|v| *v != zero) {
        path.push(xi.to_vec());
    }
    path
}

/// Potential `g` of `F[μ]` along `path`, anchored by `μ`'s reference value at
/// the first vertex.
pub fn fantappie_potential(
    mu: &FunctionalSpec,
    dom: &DomainSpec,
    path: &[Vec<Complex64>],
) -> Result<Complex64, TransformError> {
    let start = path
        .first()
        .ok_or_else(|| TransformError::Unsupported("empty path".into()))?;
    Ok(potential(mu, dom, path)? + mu.reference_value(start)?)
}
