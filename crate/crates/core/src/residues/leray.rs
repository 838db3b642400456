//! Residues localized on parametrized plane curves.
//!
//! The Leray quotient uses `du_1∧du_2 = σ∧dF`, i.e. `σ = du_1 / F_{u_2}` (or
//! `−du_2 / F_{u_1}` where `F_{u_2}` vanishes identically on the curve). The
//! fibered residue follows the same convention by replacing the fiber slot
//! of `du_1∧du_2` with `dF`.

use num_complex::Complex64;

use super::tube::fiber_points;
use super::{FormRepr, ResidualFormSpec, ResidueError, VarietySpec, TWO_PI_I};
use crate::expr::Expr;
use crate::geometry::Cycle;
use crate::polyalg::{Poly, RatFn};

/// Separation from the cycle below which poles and singular points count as
/// lying on it.
const ON_CYCLE: f64 = 1e-6;

/// `J(s)` with `J(s) ds = φ·du_1∧du_2 / dF` pulled back to the curve.
///
/// Fails when the cycle passes through a singular point of the curve or a
/// pole of the resulting density.
pub fn leray_residue_density(
    v: &VarietySpec,
    phi: &Expr,
    cycle: &Cycle,
) -> Result<RatFn, ResidueError> {
    let (f, param) = plane_curve(v)?;
    let subs = param.affine_ratfns();
    let phi_s = phi.to_ratfn(&subs)?;
    let fu1 = poly_to_ratfn(&f.partial(0), &subs);
    let fu2 = poly_to_ratfn(&f.partial(1), &subs);
    let velocity: Vec<RatFn> = param
        .powers()
        .iter()
        .skip(1)
        .map(|&p| {
            let e = p as i32 - param.powers()[0] as i32;
            if e == 0 {
                RatFn::constant(Complex64::new(0.0, 0.0))
            } else {
                &RatFn::constant(Complex64::new(e as f64, 0.0)) * &RatFn::power_of_s(e - 1)
            }
        })
        .collect();

    // singular points: common zeros of both partials along the curve
    let candidates = if !fu1.is_zero() {
        fu1.numerator().roots()?
    } else {
        fu2.numerator().roots()?
    };
    for s in candidates {
        let other = if !fu1.is_zero() { &fu2 } else { &fu1 };
        let vanishes = other.is_zero() || other.eval(s).norm() < 1e-8 * (1.0 + s.norm()).powi(8);
        if vanishes && cycle.distance(s) < ON_CYCLE {
            return Err(ResidueError::SingularCycle { at: s });
        }
    }

    let j = if !fu2.is_zero() {
        (&phi_s * &velocity[0]).div(&fu2)
    } else if !fu1.is_zero() {
        (&(-&phi_s) * &velocity[1]).div(&fu1)
    } else {
        None
    }
    .ok_or_else(|| ResidueError::InvalidVariety("curve is singular everywhere".into()))?;
    check_poles(&j, cycle)?;
    Ok(j)
}

fn plane_curve(v: &VarietySpec) -> Result<(Poly, &crate::geometry::CurveParam), ResidueError> {
    if v.m() != 1 || v.n() != 2 {
        return Err(ResidueError::InvalidVariety(
            "Leray densities need a plane curve".into(),
        ));
    }
    let param = v
        .param()
        .ok_or_else(|| ResidueError::InvalidVariety("no parametrization".into()))?;
    Ok((v.affine_generators().remove(0), param))
}

fn check_poles(j: &RatFn, cycle: &Cycle) -> Result<(), ResidueError> {
    if j.is_zero() {
        return Ok(());
    }
    for pole in j.pole_candidates()? {
        if cycle.distance(pole) < ON_CYCLE {
            return Err(ResidueError::PoleOnCycle { at: pole });
        }
    }
    Ok(())
}

/// `Σ c_α ∏ subs_i^{α_i}`.
fn poly_to_ratfn(p: &Poly, subs: &[RatFn]) -> RatFn {
    let mut out = RatFn::constant(Complex64::new(0.0, 0.0));
    for (idx, c) in p.terms() {
        let mut term = RatFn::constant(*c);
        for (i, &e) in idx.exponents().iter().enumerate() {
            if e > 0 {
                term = &term * &subs[i].powi(e as i32).expect("nonzero substitution");
            }
        }
        out = &out + &term;
    }
    out
}

/// Cycle nodes with the density folded into the weights, so a pairing is a
/// single weighted sum.
#[derive(Debug, Clone)]
pub struct PairingNodes {
    points: Vec<Vec<Complex64>>,
    weights: Vec<Complex64>,
    params: Vec<Complex64>,
}

impl PairingNodes {
    pub fn new(
        v: &VarietySpec,
        form: &ResidualFormSpec,
        cycle: &Cycle,
    ) -> Result<Self, ResidueError> {
        form.check_compatible(v)?;
        let param = v
            .param()
            .ok_or_else(|| ResidueError::InvalidVariety("no parametrization".into()))?;
        let j = match form.repr() {
            FormRepr::Leray(j) => {
                check_poles(j, cycle)?;
                j.clone()
            }
            FormRepr::Affine(phi) => leray_residue_density(v, phi, cycle)?,
        };
        let mut points = Vec::with_capacity(cycle.resolution());
        let mut weights = Vec::with_capacity(cycle.resolution());
        for (&s, &ds) in cycle.nodes().iter().zip(cycle.weights()) {
            points.push(param.point(s));
            weights.push(j.eval(s) * ds / TWO_PI_I);
        }
        Ok(PairingNodes {
            points,
            weights,
            params: cycle.nodes().to_vec(),
        })
    }

    /// Homogeneous curve points `z(s_i)`.
    pub fn points(&self) -> &[Vec<Complex64>] {
        &self.points
    }

    /// Parameter values `s_i`.
    pub fn params(&self) -> &[Complex64] {
        &self.params
    }

    /// `J(s_i)·ds_i / (2πi)`.
    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    /// `(2πi)^{-1} ∮ h(z(s)) J(s) ds`, summed in node order.
    pub fn apply(&self, h: impl Fn(&[Complex64]) -> Complex64) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| h(z) * w)
            .sum()
    }
}

/// `μ^φ(h) = (2πi)^{-1} ∮_cycle h(z(s)) J(s) ds` for a homogeneous-coordinate
/// function `h`.
pub fn residue_pairing(
    v: &VarietySpec,
    form: &ResidualFormSpec,
    h: impl Fn(&[Complex64]) -> Complex64,
    cycle: &Cycle,
) -> Result<Complex64, ResidueError> {
    Ok(PairingNodes::new(v, form, cycle)?.apply(h))
}

/// `(2πi)^{-1} ∮_base Σ_fiber h / ∂_fiber F dz_base` for a plane curve
/// `F(z_1, z_2) = 0` fibered over the coordinate `base_var`.
pub fn fibered_residue(
    curve: &Poly,
    base_var: usize,
    h: impl Fn(&[Complex64]) -> Complex64,
    base: &Cycle,
) -> Result<Complex64, ResidueError> {
    if curve.nvars() != 2 || base_var > 1 {
        return Err(ResidueError::UnsupportedBasis(
            "fibered residues need a curve in two variables".into(),
        ));
    }
    let dfiber = curve.partial(1 - base_var);
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &dx) in base.nodes().iter().zip(base.weights()) {
        let mut fiber_sum = Complex64::new(0.0, 0.0);
        for z in fiber_points(curve, base_var, x, Complex64::new(0.0, 0.0))? {
            fiber_sum += h(&z) / dfiber.eval_unchecked(&z);
        }
        total += fiber_sum * dx;
    }
    Ok(total / TWO_PI_I)
}
