//! Detection of triangular systems, shared by the tube solver and the
//! algebraic residue.

use num_complex::Complex64;

use crate::polyalg::{MultiIndex, Poly};

/// Reordering under which equation `k` involves only variables `k..m` and is
/// regular of order `orders[k]` in variable `k` at the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularForm {
    /// `equations[k]` is the index of the original equation used at step `k`.
    pub equations: Vec<usize>,
    /// `variables[k]` is the index of the original variable eliminated at step `k`.
    pub variables: Vec<usize>,
    pub orders: Vec<u32>,
}

impl TriangularForm {
    /// Finds a triangular reordering of `system` around the origin, if any.
    ///
    /// The system is expected to be shifted so that the base point is 0.
    pub fn detect(system: &[Poly]) -> Option<Self> {
        let m = system.len();
        if m == 0 || system.iter().any(|p| p.nvars() != m) {
            return None;
        }
        for equations in permutations(m) {
            for variables in permutations(m) {
                if let Some(orders) = orders_if_triangular(system, &equations, &variables) {
                    return Some(TriangularForm {
                        equations,
                        variables,
                        orders,
                    });
                }
            }
        }
        None
    }

    pub fn multiplicity(&self) -> u64 {
        self.orders.iter().map(|&a| u64::from(a)).product()
    }

    pub fn sign(&self) -> f64 {
        permutation_sign(&self.equations) * permutation_sign(&self.variables)
    }
}

fn orders_if_triangular(system: &[Poly], equations: &[usize], variables: &[usize]) -> Option<Vec<u32>> {
    let m = system.len();
    let mut orders = Vec::with_capacity(m);
    for k in 0..m {
        let eq = &system[equations[k]];
        if variables[..k].iter().any(|&v| eq.involves(v)) {
            return None;
        }
        // order along the axis of variable k with every other variable at 0
        let axis = variables[k];
        let order = eq
            .terms()
            .filter(|(idx, _)| {
                idx.exponents()
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| i == axis || e == 0)
            })
            .map(|(idx, _)| idx.exponents()[axis])
            .min()?;
        if order == 0 {
            // nonzero constant term: not a zero of this equation
            return None;
        }
        orders.push(order);
    }
    Some(orders)
}

/// `±1` by inversion count.
pub fn permutation_sign(perm: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// All permutations of `0..m` in lexicographic order.
pub(crate) fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(m - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, m - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Univariate coefficients of `p` in `var` with the other variables fixed at
/// `point` (the slot of `var` in `point` is ignored).
pub(crate) fn univariate_slice(p: &Poly, var: usize, point: &[Complex64]) -> Vec<Complex64> {
    let coeffs = p.coefficients_in(var);
    let deg = coeffs.keys().next_back().copied().unwrap_or(0) as usize;
    let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (e, c) in coeffs {
        out[e as usize] = c.eval_unchecked(point);
    }
    out
}

/// Jacobian determinant of `system` at `z`, given precomputed partials
/// `jac[i][j] = ∂F_i/∂z_j`.
pub(crate) fn jacobian_det(jac: &[Vec<Poly>], z: &[Complex64]) -> Complex64 {
    let values: Vec<Vec<Complex64>> = jac
        .iter()
        .map(|row| row.iter().map(|p| p.eval_unchecked(z)).collect())
        .collect();
    det_numeric(values)
}

pub(crate) fn jacobian(system: &[Poly]) -> Vec<Vec<Poly>> {
    system
        .iter()
        .map(|f| (0..f.nvars()).map(|j| f.partial(j)).collect())
        .collect()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det_numeric(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .expect("non-empty range");
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
        }
    }
    det
}

/// Solves `a·x = b`; `None` when `a` is singular.
pub(crate) fn solve_linear(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() == 0.0 {
            return None;
        }
        a.swap(pivot, col);
        b.swap(pivot, col);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let sub = factor * a[col][k];
                a[row][k] -= sub;
            }
            let sub = factor * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let tail: Complex64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// The zero index for `m` variables, used for constant-term lookups.
pub(crate) fn origin(m: usize) -> MultiIndex {
    MultiIndex::zero(m)
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

    #[test]
    fn detects_swapped_coordinates() {
        let sys = [poly(&[(vec![0, 1], 1.0)]), poly(&[(vec![1, 0], 1.0)])];
        let t = TriangularForm::detect(&sys).unwrap();
        assert_eq!(t.sign(), -1.0);
        assert_eq!(t.orders, vec![1, 1]);
    }

    #[test]
    fn detects_orders() {
        // (z1 - z2^2, z2^3)
        let sys = [
            poly(&[(vec![1, 0], 1.0), (vec![0, 2], -1.0)]),
            poly(&[(vec![0, 3], 1.0)]),
        ];
        let t = TriangularForm::detect(&sys).unwrap();
        assert_eq!(t.variables, vec![0, 1]);
        assert_eq!(t.orders, vec![1, 3]);
        assert_eq!(t.multiplicity(), 3);
    }

    #[test]
    fn rejects_coupled_system() {
        // (z1^2 + z2^3, z1^3 + z2^2) couples both variables in both equations
        let sys = [
            poly(&[(vec![2, 0], 1.0), (vec![0, 3], 1.0)]),
            poly(&[(vec![3, 0], 1.0), (vec![0, 2], 1.0)]),
        ];
        assert!(TriangularForm::detect(&sys).is_none());
    }

    #[test]
    fn linear_algebra_helpers() {
        let a = vec![vec![c(0.0), c(2.0)], vec![c(3.0), c(1.0)]];
        assert_eq!(det_numeric(a.clone()), c(-6.0));
        let x = solve_linear(a, vec![c(4.0), c(5.0)]).unwrap();
        assert!((x[0] - c(1.0)).norm() < 1e-15 && (x[1] - c(2.0)).norm() < 1e-15);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutation_sign(&[2, 0, 1]), 1.0);
    }
}
