//! Exact point residues of triangular systems by series expansion.
//!
//! With equation `E_k` involving only `v_k, …, v_m` and regular of order `a`
//! in `v_k`, write `E_k = v_k^a·U + G` where `G` collects the terms of lower
//! `v_k`-degree (all of positive order in the later variables). On an
//! admissible tube `|G| ≪ |v_k^a U|`, and
//!
//! `(2πi)^{-1} ∮ H dv_k / E_k = Σ_ℓ (−1)^ℓ [v_k^{a(ℓ+1)−1}] (H G^ℓ U^{−(ℓ+1)})`,
//!
//! a series in the later variables. Only finitely many terms matter for the
//! final constant, so every step works with truncated polynomials.

use num_complex::Complex64;

use super::shape::{origin, TriangularForm};
use super::ResidueError;
use crate::polyalg::{MultiIndex, Poly};

/// `(2πi)^{-m} ∮ h dz / ∏ F_k` around the isolated zero `p`.
///
/// Only systems that become triangular after reordering are supported;
/// anything else is an `UnsupportedBasis` error and must go through the tube
/// quadrature instead.
pub fn grothendieck_residue(
    system: &[Poly],
    p: &[Complex64],
    h: &Poly,
) -> Result<Complex64, ResidueError> {
    let m = system.len();
    if m == 0 || p.len() != m || h.nvars() != m || system.iter().any(|f| f.nvars() != m) {
        return Err(ResidueError::UnsupportedBasis(
            "need m equations and a numerator in m variables".into(),
        ));
    }
    for f in system {
        if f.eval(p)?.norm() > 1e-12 * f.max_abs_coeff().max(1.0) {
            return Err(ResidueError::NotAZero);
        }
    }
    let shifted: Vec<Poly> = system.iter().map(|f| chop(&f.shift(p))).collect();
    let form = TriangularForm::detect(&shifted).ok_or_else(|| {
        ResidueError::UnsupportedBasis("system is not triangular in any ordering".into())
    })?;

    // rename variables so that step k eliminates variable k
    let mut rename = vec![0; m];
    for (k, &v) in form.variables.iter().enumerate() {
        rename[v] = k;
    }
    let equations: Vec<Poly> = form
        .equations
        .iter()
        .map(|&e| shifted[e].permute_vars(&rename))
        .collect();

    // degree budgets, computed from the last step backwards
    let mut budget_in = vec![0u32; m];
    let mut budget_out = 0u32;
    for k in (0..m).rev() {
        let a = form.orders[k];
        budget_in[k] = a * (budget_out + 1) - 1 + budget_out;
        budget_out = budget_in[k];
    }

    let mut current = h.shift(p).permute_vars(&rename).truncate(budget_in[0]);
    for k in 0..m {
        let a = form.orders[k];
        let cap = budget_in[k];
        let later = if k + 1 < m { budget_in[k + 1] } else { 0 };
        let (unit, rest) = split(&equations[k], k, a);
        let unit_inv = unit.series_inverse(cap)?;
        let mut next = Poly::zero(m);
        // term ℓ carries H·U^{-(ℓ+1)}·G^ℓ
        let mut factor = current.mul_truncated(&unit_inv, Some(cap));
        for l in 0..=later {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = extract(&factor, k, a * (l + 1) - 1);
            next = &next + &coeff.scale(Complex64::new(sign, 0.0));
            if rest.is_zero() {
                break;
            }
            factor = factor
                .mul_truncated(&rest, Some(cap))
                .mul_truncated(&unit_inv, Some(cap));
            if factor.is_zero() {
                break;
            }
        }
        current = next.truncate(later);
    }
    Ok(current.coeff(&origin(m)) * form.sign())
}

/// Splits `e` into `(U, G)` with `e = v^a·U + G` for `v` = variable `var`.
fn split(e: &Poly, var: usize, a: u32) -> (Poly, Poly) {
    let m = e.nvars();
    let mut unit = Poly::zero(m);
    let mut rest = Poly::zero(m);
    for (idx, c) in e.terms() {
        let mut exps = idx.exponents().to_vec();
        if exps[var] >= a {
            exps[var] -= a;
            unit = &unit + &Poly::monomial(MultiIndex::new(exps), *c);
        } else {
            rest = &rest + &Poly::monomial(idx.clone(), *c);
        }
    }
    (unit, rest)
}

/// Coefficient of `v^e` as a polynomial in the remaining variables.
fn extract(p: &Poly, var: usize, e: u32) -> Poly {
    let mut out = Poly::zero(p.nvars());
    for (idx, c) in p.terms() {
        if idx.exponents()[var] == e {
            let mut exps = idx.exponents().to_vec();
            exps[var] = 0;
            out = &out + &Poly::monomial(MultiIndex::new(exps), *c);
        }
    }
    out
}

/// Drops coefficients that are rounding noise left over from shifting.
fn chop(p: &Poly) -> Poly {
    let scale = p.max_abs_coeff();
    let mut out = Poly::zero(p.nvars());
    for (idx, c) in p.terms() {
        if c.norm() > 1e-14 * scale {
            out = &out + &Poly::monomial(idx.clone(), *c);
        }
    }
    out
}
