//! Change of generators `F = A·P` for point residues.

use num_complex::Complex64;

use super::shape::{permutation_sign, permutations};
use super::{grothendieck_residue, tube_integral, AdmissibleSchedule, ResidueError, TubeRegion};
use crate::polyalg::Poly;

/// Both sides of `res_P(h) = res_{A·P}(det A · h)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationReport {
    /// `res_P(h)`, exact.
    pub lhs: Complex64,
    /// `res_F(det A·h)` by tube quadrature.
    pub rhs: Complex64,
    /// `res_F(h)`, the same quadrature with the determinant left out.
    pub rhs_without_det: Complex64,
    /// `|lhs − rhs|` relative to the larger side.
    pub discrepancy: f64,
    pub discrepancy_without_det: f64,
}

/// Determinant of a square polynomial matrix by the Leibniz expansion.
pub fn determinant(a: &[Vec<Poly>]) -> Poly {
    let m = a.len();
    let nvars = a[0][0].nvars();
    let mut out = Poly::zero(nvars);
    for perm in permutations(m) {
        let mut term = Poly::constant(nvars, Complex64::new(permutation_sign(&perm), 0.0));
        for (row, &col) in perm.iter().enumerate() {
            term = &term * &a[row][col];
        }
        out = &out + &term;
    }
    out
}

pub fn transformation_law_check(
    p_basis: &[Poly],
    a: &[Vec<Poly>],
    h: &Poly,
    point: &[Complex64],
    sched: &AdmissibleSchedule,
) -> Result<TransformationReport, ResidueError> {
    let m = p_basis.len();
    if a.len() != m || a.iter().any(|row| row.len() != m) {
        return Err(ResidueError::UnsupportedBasis(
            "transition matrix must be square of the basis size".into(),
        ));
    }
    let det = determinant(a);
    if det.eval(point)?.norm() < 1e-12 {
        return Err(ResidueError::DegenerateTransition);
    }
    let f: Vec<Poly> = (0..m)
        .map(|i| {
            (0..m).fold(Poly::zero(p_basis[i].nvars()), |acc, j| {
                &acc + &(&a[i][j] * &p_basis[j])
            })
        })
        .collect();
    let lhs = grothendieck_residue(p_basis, point, h)?;
    let with_det = |z: &[Complex64]| det.eval_unchecked(z) * h.eval_unchecked(z);
    let rhs = tube_integral(&f, &with_det, TubeRegion::Point(point), sched)?.value;
    let plain = |z: &[Complex64]| h.eval_unchecked(z);
    let rhs_without_det = tube_integral(&f, &plain, TubeRegion::Point(point), sched)?.value;
    Ok(TransformationReport {
        lhs,
        rhs,
        rhs_without_det,
        discrepancy: relative(lhs, rhs),
        discrepancy_without_det: relative(lhs, rhs_without_det),
    })
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
