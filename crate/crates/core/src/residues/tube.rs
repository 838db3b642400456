//! Tube limits `(2πi)^{-m} ∫_{|F_k| = ε_k} h dz / ∏ F_k` along an admissible
//! schedule.
//!
//! The tube is parametrized through `w = F(z)`: on the torus `|w_k| = ε_k`
//! the integrand becomes the sum over local preimages of `h / det F'`, and the
//! normalized integral is its mean over the torus. The numerator is only ever
//! evaluated pointwise, so it need not be holomorphic.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::shape::{jacobian, jacobian_det, solve_linear, univariate_slice, TriangularForm};
use super::{AdmissibleSchedule, ResidueError};
use crate::geometry::Cycle;
use crate::polyalg::{Poly, UniPoly};

const START_NODES: usize = 64;

/// Where the tube lives.
#[derive(Debug, Clone, Copy)]
pub enum TubeRegion<'a> {
    /// Around an isolated common zero.
    Point(&'a [Complex64]),
    /// Over a cycle in the `base_var` coordinate of a plane curve `F = 0`; the
    /// fiber coordinate is the other one. The tube is oriented so that the
    /// fiber slot of `dz_1∧dz_2` is replaced by `dF`.
    Fibered { base_var: usize, cycle: &'a Cycle },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeOutcome {
    pub value: Complex64,
    /// Tube radii of the accepted stage.
    pub radii: Vec<f64>,
    /// Torus nodes per circle at the accepted stage.
    pub nodes: usize,
    /// Values at every completed stage.
    pub history: Vec<Complex64>,
}

pub fn tube_integral(
    generators: &[Poly],
    numerator: &dyn Fn(&[Complex64]) -> Complex64,
    region: TubeRegion<'_>,
    sched: &AdmissibleSchedule,
) -> Result<TubeOutcome, ResidueError> {
    let solver = Solver::new(generators, region)?;
    let m = generators.len();
    let mut history: Vec<Complex64> = Vec::new();
    let mut escaped = None;
    for stage in 0..=sched.halvings {
        let radii = sched.radii(stage, m);
        // early stages may be too wide to be local; only consecutive local
        // stages are compared
        let (value, nodes) = match refine(&solver, numerator, &radii, m, sched.tol) {
            Ok(v) => v,
            Err(e @ ResidueError::TubeEscapes(_)) => {
                history.clear();
                escaped = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        if let Some(&previous) = history.last() {
            if (value - previous).norm() <= sched.tol * value.norm().max(1.0) {
                history.push(value);
                return Ok(TubeOutcome {
                    value,
                    radii,
                    nodes,
                    history,
                });
            }
        }
        history.push(value);
    }
    let n = history.len();
    if n < 2 {
        return Err(escaped.expect("fewer than two local stages means one escaped"));
    }
    Err(ResidueError::NotStabilized {
        previous: history[n - 2],
        last: history[n - 1],
    })
}

/// Doubles the torus resolution until two levels agree within `0.1·tol`.
fn refine(
    solver: &Solver<'_>,
    numerator: &dyn Fn(&[Complex64]) -> Complex64,
    radii: &[f64],
    m: usize,
    tol: f64,
) -> Result<(Complex64, usize), ResidueError> {
    let cap = if m == 1 { 4096 } else { 256 };
    let mut nodes = START_NODES;
    let mut previous = solver.torus_mean(numerator, radii, nodes)?;
    while nodes < cap {
        nodes *= 2;
        let value = solver.torus_mean(numerator, radii, nodes)?;
        if (value - previous).norm() <= 0.1 * tol * value.norm().max(1.0) {
            return Ok((value, nodes));
        }
        previous = value;
    }
    Err(ResidueError::QuadratureNotConverged { nodes })
}

enum Solver<'a> {
    Triangular {
        system: &'a [Poly],
        point: Vec<Complex64>,
        form: TriangularForm,
        jac: Vec<Vec<Poly>>,
    },
    Newton {
        system: &'a [Poly],
        point: Vec<Complex64>,
        jac: Vec<Vec<Poly>>,
    },
    Fibered {
        curve: &'a Poly,
        base_var: usize,
        cycle: &'a Cycle,
        fiber_derivative: Poly,
    },
}

impl<'a> Solver<'a> {
    fn new(system: &'a [Poly], region: TubeRegion<'a>) -> Result<Self, ResidueError> {
        let m = system.len();
        match region {
            TubeRegion::Point(p) => {
                if system.iter().any(|f| f.nvars() != m) || p.len() != m {
                    return Err(ResidueError::UnsupportedBasis(
                        "point tubes need m equations in m variables".into(),
                    ));
                }
                check_zero(system, p)?;
                let jac = jacobian(system);
                let shifted: Vec<Poly> = system.iter().map(|f| f.shift(p)).collect();
                if let Some(form) = TriangularForm::detect(&shifted) {
                    return Ok(Solver::Triangular {
                        system,
                        point: p.to_vec(),
                        form,
                        jac,
                    });
                }
                if jacobian_det(&jac, p).norm() > 1e-12 {
                    return Ok(Solver::Newton {
                        system,
                        point: p.to_vec(),
                        jac,
                    });
                }
                Err(ResidueError::UnsupportedBasis(
                    "neither triangular nor a simple zero".into(),
                ))
            }
            TubeRegion::Fibered { base_var, cycle } => {
                if m != 1 || system[0].nvars() != 2 || base_var > 1 {
                    return Err(ResidueError::UnsupportedBasis(
                        "fibered tubes need one equation in two variables".into(),
                    ));
                }
                Ok(Solver::Fibered {
                    curve: &system[0],
                    base_var,
                    cycle,
                    fiber_derivative: system[0].partial(1 - base_var),
                })
            }
        }
    }

    /// Normalized tube integral at fixed radii with `nodes` per circle.
    fn torus_mean(
        &self,
        numerator: &dyn Fn(&[Complex64]) -> Complex64,
        radii: &[f64],
        nodes: usize,
    ) -> Result<Complex64, ResidueError> {
        let m = radii.len();
        let circle: Vec<Complex64> = (0..nodes)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / nodes as f64))
            .collect();
        if let Solver::Fibered {
            curve,
            base_var,
            cycle,
            fiber_derivative,
        } = self
        {
            let mut total = Complex64::new(0.0, 0.0);
            for (&x, &ds) in cycle.nodes().iter().zip(cycle.weights()) {
                let mut mean = Complex64::new(0.0, 0.0);
                for &dir in &circle {
                    let w = dir * radii[0];
                    for z in fiber_points(curve, *base_var, x, w)? {
                        mean += numerator(&z) / fiber_derivative.eval_unchecked(&z);
                    }
                }
                total += mean / nodes as f64 * ds;
            }
            return Ok(total);
        }
        let total_nodes = nodes.pow(m as u32);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut w = vec![Complex64::new(0.0, 0.0); m];
        for flat in 0..total_nodes {
            let mut rest = flat;
            for k in (0..m).rev() {
                w[k] = circle[rest % nodes] * radii[k];
                rest /= nodes;
            }
            acc += self.preimage_sum(numerator, &w)?;
        }
        Ok(acc / total_nodes as f64)
    }

    /// `Σ h(z) / det F'(z)` over the preimages of `w` near the base point.
    fn preimage_sum(
        &self,
        numerator: &dyn Fn(&[Complex64]) -> Complex64,
        w: &[Complex64],
    ) -> Result<Complex64, ResidueError> {
        let (preimages, jac) = match self {
            Solver::Triangular {
                system,
                point,
                form,
                jac,
            } => (triangular_preimages(system, point, form, w)?, jac),
            Solver::Newton { system, point, jac } => {
                (vec![newton_preimage(system, jac, point, w)?], jac)
            }
            Solver::Fibered { .. } => unreachable!("fibered tubes are summed separately"),
        };
        Ok(preimages
            .iter()
            .map(|z| numerator(z) / jacobian_det(jac, z))
            .sum())
    }
}

fn check_zero(system: &[Poly], p: &[Complex64]) -> Result<(), ResidueError> {
    for f in system {
        if f.eval(p)?.norm() > 1e-12 * f.max_abs_coeff().max(1.0) {
            return Err(ResidueError::NotAZero);
        }
    }
    Ok(())
}

/// Solves `E_k = w_k` from the last variable back to the first, keeping at
/// each step the `a_k` roots closest to the base point.
fn triangular_preimages(
    system: &[Poly],
    point: &[Complex64],
    form: &TriangularForm,
    w: &[Complex64],
) -> Result<Vec<Vec<Complex64>>, ResidueError> {
    let m = system.len();
    let mut partial = vec![point.to_vec()];
    for k in (0..m).rev() {
        let eq = form.equations[k];
        let var = form.variables[k];
        let keep = form.orders[k] as usize;
        let mut next = Vec::with_capacity(partial.len() * keep);
        for z in &partial {
            let mut coeffs = univariate_slice(&system[eq], var, z);
            coeffs[0] -= w[eq];
            let mut roots = UniPoly::new(coeffs).roots()?;
            if roots.len() < keep {
                return Err(ResidueError::TubeEscapes(
                    "fewer local roots than the multiplicity".into(),
                ));
            }
            roots.sort_by(|a, b| {
                (a - point[var])
                    .norm()
                    .total_cmp(&(b - point[var]).norm())
            });
            if let Some(outside) = roots.get(keep) {
                let inner = (roots[keep - 1] - point[var]).norm();
                let outer = (outside - point[var]).norm();
                if inner >= 0.5 * outer {
                    return Err(ResidueError::TubeEscapes(format!(
                        "local roots at distance {inner:.3e} are not separated from a root at {outer:.3e}"
                    )));
                }
            }
            for root in roots.into_iter().take(keep) {
                let mut zz = z.clone();
                zz[var] = root;
                next.push(zz);
            }
        }
        partial = next;
    }
    Ok(partial)
}

fn newton_preimage(
    system: &[Poly],
    jac: &[Vec<Poly>],
    point: &[Complex64],
    w: &[Complex64],
) -> Result<Vec<Complex64>, ResidueError> {
    let eval_jac = |z: &[Complex64]| -> Vec<Vec<Complex64>> {
        jac.iter()
            .map(|row| row.iter().map(|p| p.eval_unchecked(z)).collect())
            .collect()
    };
    let mut z = point.to_vec();
    for _ in 0..60 {
        let residual: Vec<Complex64> = system
            .iter()
            .zip(w)
            .map(|(f, wk)| f.eval_unchecked(&z) - wk)
            .collect();
        let step = solve_linear(eval_jac(&z), residual)
            .ok_or_else(|| ResidueError::TubeEscapes("singular Jacobian on the tube".into()))?;
        let size: f64 = step.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (zi, si) in z.iter_mut().zip(&step) {
            *zi -= si;
        }
        let scale: f64 = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
        if size <= 1e-15 * scale {
            return Ok(z);
        }
    }
    Err(ResidueError::TubeEscapes(
        "Newton iteration for the local inverse did not converge".into(),
    ))
}

/// All points of `F(x, ·) = w` over the base value `x`.
pub(super) fn fiber_points(
    curve: &Poly,
    base_var: usize,
    x: Complex64,
    w: Complex64,
) -> Result<Vec<Vec<Complex64>>, ResidueError> {
    let fiber_var = 1 - base_var;
    let mut at = [Complex64::new(0.0, 0.0); 2];
    at[base_var] = x;
    let mut coeffs = univariate_slice(curve, fiber_var, &at);
    let full_degree = coeffs.len() - 1;
    coeffs[0] -= w;
    let poly = UniPoly::new(coeffs);
    if poly.degree() != Some(full_degree) {
        return Err(ResidueError::BranchPoint { at: x });
    }
    let roots = poly.roots()?;
    let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if (roots[i] - roots[j]).norm_sqr() < 1e-10 * scale * scale {
                return Err(ResidueError::BranchPoint { at: x });
            }
        }
    }
    Ok(roots
        .into_iter()
        .map(|y| {
            let mut z = at;
            z[fiber_var] = y;
            z.to_vec()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(terms: &[(Vec<u32>, f64)]) -> Poly {
        Poly::from_terms(terms[0].0.len(), terms.iter().map(|(e, v)| (e.clone(), c(*v)))).unwrap()
    }

    fn origin() -> [Complex64; 2] {
        [c(0.0), c(0.0)]
    }

    #[test]
    fn iterated_cauchy_normalization() {
        let sys = [poly(&[(vec![1, 0], 1.0)]), poly(&[(vec![0, 1], 1.0)])];
        let out = tube_integral(&sys, &|_| c(1.0), TubeRegion::Point(&origin()), &Default::default()).unwrap();
        assert!((out.value - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn double_root_picks_derivative() {
        let sys = [poly(&[(vec![2, 0], 1.0)]), poly(&[(vec![0, 1], 1.0)])];
        let out = tube_integral(&sys, &|z| z[0], TubeRegion::Point(&origin()), &Default::default()).unwrap();
        assert!((out.value - c(1.0)).norm() < 1e-10, "{}", out.value);
    }

    #[test]
    fn ideal_numerator_vanishes() {
        let sys = [poly(&[(vec![1, 0], 1.0)]), poly(&[(vec![0, 1], 1.0)])];
        let h = |z: &[Complex64]| z[0] * (z[1] * 3.0 + c(2.0)).exp();
        let out = tube_integral(&sys, &h, TubeRegion::Point(&origin()), &Default::default()).unwrap();
        assert!(out.value.norm() < 1e-12);
    }

    #[test]
    fn divergent_numerator_is_reported() {
        let sys = [poly(&[(vec![1, 0], 1.0)]), poly(&[(vec![0, 1], 1.0)])];
        let h = |z: &[Complex64]| c(1.0 / z[0].norm());
        let err = tube_integral(&sys, &h, TubeRegion::Point(&origin()), &Default::default());
        assert!(matches!(err, Err(ResidueError::NotStabilized { .. })));
    }

    #[test]
    fn rejects_non_zero_point() {
        let sys = [poly(&[(vec![1, 0], 1.0)]), poly(&[(vec![0, 1], 1.0)])];
        let err = tube_integral(&sys, &|_| c(1.0), TubeRegion::Point(&[c(1.0), c(0.0)]), &Default::default());
        assert_eq!(err, Err(ResidueError::NotAZero));
    }
}
