//! Martineau functional `μ^g(h) = ∫_{bG_ν} h Ω_g` of a homogeneity-0 function
//! `g` on the dual domain, with
//! `Ω_g = −(2πi)^{-n} ∂_0^n g(η) ω'(η) ∧ du_1∧…∧du_n`,
//! `ω'(η) = Σ_j (−1)^j η_j dη_1∧…∧\hat{dη_j}∧…∧dη_n`, on the sphere
//! `|u| = r + ν` oriented as the boundary of the ball.
//!
//! For `n = 1` that orientation yields `F[μ^g] = −dg`, so the circle weights
//! carry the opposite sign to keep `F[μ^g] = dg` in both dimensions.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::{gauss_legendre, TransformError};
use crate::geometry::{eta_affine, DomainSpec};
use crate::polyalg::homogeneity_of;
use crate::residues::TWO_PI_I;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartineauOptions {
    /// Sphere radius offset: the sphere is `|u| = r + ν`.
    pub nu: f64,
    /// Nodes per angular direction on the coarse grid; the fine grid doubles it.
    pub grid: usize,
    /// Allowed coarse/fine change relative to the absolute quadrature mass.
    pub tol: f64,
    /// Cauchy stencil nodes for `∂_0^n g`.
    pub stencil_nodes: usize,
}

impl Default for MartineauOptions {
    fn default() -> Self {
        MartineauOptions {
            nu: 0.25,
            grid: 48,
            tol: 1e-6,
            stencil_nodes: 32,
        }
    }
}

/// Quadrature nodes on the sphere with the kernel folded into the weights.
#[derive(Debug, Clone)]
struct SphereRule {
    /// Homogeneous points `(1, u)`, stored with stride `n + 1`.
    points: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl SphereRule {
    fn stride(&self) -> usize {
        self.points.len() / self.weights.len()
    }

    /// `(Σ h Ω, Σ |h Ω|)` for each of several integrands at once.
    fn apply_many(&self, hs: &[&dyn Fn(&[Complex64]) -> Complex64]) -> (Vec<Complex64>, Vec<f64>) {
        let stride = self.stride();
        let mut sums = vec![Complex64::new(0.0, 0.0); hs.len()];
        let mut mass = vec![0.0; hs.len()];
        for (z, w) in self.points.chunks_exact(stride).zip(&self.weights) {
            for (k, h) in hs.iter().enumerate() {
                let term = h(z) * w;
                sums[k] += term;
                mass[k] += term.norm();
            }
        }
        (sums, mass)
    }
}

#[derive(Debug, Clone)]
pub struct MartineauFunctional {
    dom: DomainSpec,
    opts: MartineauOptions,
    coarse: SphereRule,
    fine: SphereRule,
}

/// Builds `μ^g` on `|u| = r + ν` for `n ≤ 2`.
///
/// `d0n` may supply `∂_0^n g` in closed form; otherwise it is taken by a
/// one-dimensional Cauchy stencil in `ξ_0` that stays inside the dual domain.
pub fn martineau_invert(
    g: &dyn Fn(&[Complex64]) -> Complex64,
    d0n: Option<&dyn Fn(&[Complex64]) -> Complex64>,
    dom: &DomainSpec,
    opts: MartineauOptions,
) -> Result<MartineauFunctional, TransformError> {
    let n = dom.n();
    if !(1..=2).contains(&n) {
        return Err(TransformError::Unsupported(format!(
            "Martineau quadrature is implemented for n ≤ 2, got n = {n}"
        )));
    }
    if !(opts.nu > 0.0) || opts.grid < 4 || opts.stencil_nodes < 8 || opts.stencil_nodes % 2 != 0 {
        return Err(TransformError::Unsupported(
            "Martineau options need ν > 0, grid ≥ 4 and an even stencil of at least 8 nodes".into(),
        ));
    }
    check_homogeneity(g, dom)?;
    let radius = dom.effective_radius() + opts.nu;
    let step = (0.1 * radius * radius).min(0.5 * radius * opts.nu);
    let derivative = |eta: &[Complex64]| -> Complex64 {
        match d0n {
            Some(f) => f(eta),
            None => xi0_derivative(g, eta, n as u32, step, opts.stencil_nodes),
        }
    };
    let build = |grid: usize| match n {
        1 => circle_rule(radius, grid, &derivative),
        _ => sphere_rule(radius, grid, &derivative),
    };
    Ok(MartineauFunctional {
        dom: *dom,
        opts,
        coarse: build(opts.grid),
        fine: build(2 * opts.grid),
    })
}

fn check_homogeneity(
    g: &dyn Fn(&[Complex64]) -> Complex64,
    dom: &DomainSpec,
) -> Result<(), TransformError> {
    let n = dom.n();
    let r = dom.effective_radius();
    let offsets = [
        Complex64::new(0.2, 0.0),
        Complex64::new(-0.1, 0.2),
        Complex64::new(0.0, -0.3),
    ];
    let probes: Vec<Vec<Complex64>> = (0..3)
        .map(|p| {
            std::iter::once(Complex64::from_polar(1.0 + 0.5 * p as f64, 0.3 * p as f64))
                .chain((0..n).map(|k| offsets[(p + k) % 3] * (1.0 + 0.5 * p as f64) / r))
                .collect()
        })
        .collect();
    if probes.iter().all(|z| g(z).norm() == 0.0) {
        return Ok(());
    }
    match homogeneity_of(g, &probes) {
        Ok(0) => Ok(()),
        _ => Err(TransformError::NotHomogeneous),
    }
}

/// `∂^k g / ∂ξ_0^k` at `eta` by a Cauchy circle of radius `step` in `ξ_0`.
fn xi0_derivative(
    g: &dyn Fn(&[Complex64]) -> Complex64,
    eta: &[Complex64],
    k: u32,
    step: f64,
    nodes: usize,
) -> Complex64 {
    let mut point = eta.to_vec();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let angle = 2.0 * PI * j as f64 / nodes as f64;
        point[0] = eta[0] + Complex64::from_polar(step, angle);
        acc += g(&point) * Complex64::from_polar(1.0, -angle * k as f64);
    }
    let fact: f64 = (1..=k).map(f64::from).product();
    acc * fact / (nodes as f64 * step.powi(k as i32))
}

/// `n = 1`: trapezoid rule on the circle `|u| = R`, counterclockwise, with the
/// sign flip described in the module docs.
fn circle_rule(radius: f64, grid: usize, d0n: &dyn Fn(&[Complex64]) -> Complex64) -> SphereRule {
    let mut points = Vec::with_capacity(2 * grid);
    let mut weights = Vec::with_capacity(grid);
    for j in 0..grid {
        let u = Complex64::from_polar(radius, 2.0 * PI * j as f64 / grid as f64);
        let du = Complex64::new(0.0, 1.0) * u * (2.0 * PI / grid as f64);
        let eta = eta_affine(&[u]);
        // Ω = (2πi)^{-1} ∂_0 g(η) ū du; negated for the orientation convention
        weights.push(-(d0n(&eta) * u.conj() * du) / TWO_PI_I);
        points.push(Complex64::new(1.0, 0.0));
        points.push(u);
    }
    SphereRule { points, weights }
}

/// `n = 2`: Gauss–Legendre in `θ ∈ [0, π/2]` and trapezoid in `α, β` for
/// `u = R (cos θ e^{iα}, sin θ e^{iβ})`.
fn sphere_rule(radius: f64, grid: usize, d0n: &dyn Fn(&[Complex64]) -> Complex64) -> SphereRule {
    let thetas = gauss_legendre(grid, 0.0, FRAC_PI_2);
    let angle_weight = 2.0 * PI / grid as f64;
    let phases: Vec<Complex64> = (0..grid)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64))
        .collect();
    let i = Complex64::new(0.0, 1.0);
    let prefactor = -(TWO_PI_I * TWO_PI_I).inv();
    let mut points = Vec::with_capacity(3 * grid * grid * grid);
    let mut weights = Vec::with_capacity(grid * grid * grid);
    for &(theta, w_theta) in &thetas {
        let (sin, cos) = theta.sin_cos();
        for ea in &phases {
            for eb in &phases {
                let u1 = ea * (radius * cos);
                let u2 = eb * (radius * sin);
                // derivatives along (θ, α, β)
                let du1 = [ea * (-radius * sin), i * u1, Complex64::new(0.0, 0.0)];
                let du2 = [eb * (radius * cos), Complex64::new(0.0, 0.0), i * u2];
                let dbar1 = du1.map(|v| v.conj());
                let dbar2 = du2.map(|v| v.conj());
                let form = u2.conj() * det3(&dbar1, &du1, &du2) - u1.conj() * det3(&dbar2, &du1, &du2);
                let eta = eta_affine(&[u1, u2]);
                // (θ, α, β) is inward for the ball, hence the minus sign
                let w = prefactor * d0n(&eta) * (-form) * (w_theta * angle_weight * angle_weight);
                points.extend([Complex64::new(1.0, 0.0), u1, u2]);
                weights.push(w);
            }
        }
    }
    SphereRule { points, weights }
}

fn det3(a: &[Complex64; 3], b: &[Complex64; 3], c: &[Complex64; 3]) -> Complex64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

impl MartineauFunctional {
    /// Domain whose dual contains every admissible `ξ`: the kernel must not
    /// vanish on the sphere `|u| = r + ν`.
    pub fn sphere_domain(&self) -> DomainSpec {
        self.dom
            .exhaust(self.opts.nu)
            .expect("positive offset keeps the domain valid")
    }

    pub fn options(&self) -> MartineauOptions {
        self.opts
    }

    fn checked(
        &self,
        hs: &[&dyn Fn(&[Complex64]) -> Complex64],
    ) -> Result<Vec<Complex64>, TransformError> {
        let (coarse, _) = self.coarse.apply_many(hs);
        let (fine, mass) = self.fine.apply_many(hs);
        for ((c, f), m) in coarse.iter().zip(&fine).zip(&mass) {
            let change = (f - c).norm();
            if change > self.opts.tol * m.max(f64::MIN_POSITIVE) {
                return Err(TransformError::NotConverged { change, mass: *m });
            }
        }
        Ok(fine)
    }

    /// `μ^g(h)` on the fine grid, after checking it against the coarse grid.
    pub fn apply(&self, h: &dyn Fn(&[Complex64]) -> Complex64) -> Result<Complex64, TransformError> {
        Ok(self.checked(&[h])?[0])
    }

    /// All Fantappiè components at `ξ` in one pass over the grid.
    pub fn fantappie(&self, xi: &[Complex64]) -> Result<Vec<Complex64>, TransformError> {
        let kernels: Vec<Box<dyn Fn(&[Complex64]) -> Complex64 + '_>> = (0..xi.len())
            .map(|j| {
                Box::new(move |z: &[Complex64]| {
                    let pairing: Complex64 = xi.iter().zip(z).map(|(a, b)| a * b).sum();
                    z[j] / pairing
                }) as Box<dyn Fn(&[Complex64]) -> Complex64>
            })
            .collect();
        let refs: Vec<&dyn Fn(&[Complex64]) -> Complex64> = kernels.iter().map(|k| k.as_ref()).collect();
        self.checked(&refs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn one_dimensional_roundtrip() {
        let dom = DomainSpec::new(1, 1.0, 0.0).unwrap();
        let g = |x: &[Complex64]| x[1] / x[0];
        let mu = martineau_invert(&g, None, &dom, MartineauOptions::default()).unwrap();
        let xi = [c(1.0), Complex64::new(0.3, 0.2)];
        let f = mu.fantappie(&xi).unwrap();
        let dg = [-xi[1] / (xi[0] * xi[0]), xi[0].inv()];
        for (a, b) in f.iter().zip(dg) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_inhomogeneous_input() {
        let dom = DomainSpec::new(2, 1.0, 0.0).unwrap();
        let g = |x: &[Complex64]| x[1];
        assert_eq!(
            martineau_invert(&g, None, &dom, MartineauOptions::default()).err(),
            Some(TransformError::NotHomogeneous)
        );
    }

    #[test]
    fn constant_gives_zero_functional() {
        let dom = DomainSpec::new(2, 1.0, 0.0).unwrap();
        let opts = MartineauOptions {
            grid: 12,
            ..Default::default()
        };
        let constant = |_: &[Complex64]| c(3.0);
        let zero = |_: &[Complex64]| c(0.0);
        let mu = martineau_invert(&constant, Some(&zero), &dom, opts).unwrap();
        let v = mu.apply(&|z: &[Complex64]| z[1] * z[2] + c(1.0)).unwrap();
        assert_eq!(v, c(0.0));
        // the stencil sees the same thing up to rounding
        let d = xi0_derivative(&constant, &[c(-1.5), c(0.2), c(0.1)], 2, 0.1, 32);
        assert!(d.norm() < 1e-11);
    }
}
