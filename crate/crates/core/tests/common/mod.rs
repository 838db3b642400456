//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use fantappie_core::geometry::CurveParam;
use fantappie_core::polyalg::{HomPoly, Poly};
use fantappie_core::residues::{ResidualFormSpec, VarietySpec};
use fantappie_core::Complex64;
use nalgebra::{DMatrix, Schur};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * PI);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn ci(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> Poly {
    Poly::from_terms(nvars, terms.iter().map(|(e, v)| (e.to_vec(), c(*v)))).unwrap()
}

/// `z_0 z_2 − z_1²`, parametrized by `(1, s, s²)`.
pub fn conic() -> VarietySpec {
    let p = HomPoly::from_terms(3, 2, [(vec![1, 0, 1], c(1.0)), (vec![0, 2, 0], c(-1.0))]).unwrap();
    VarietySpec::new(vec![p], -1, Some(CurveParam::monomial(vec![0, 1, 2]))).unwrap()
}

/// `z_0 z_2² − z_1³`, parametrized by `(1, s², s³)`; singular at `(1, 0, 0)`.
pub fn cusp() -> VarietySpec {
    let p = HomPoly::from_terms(3, 3, [(vec![1, 0, 2], c(1.0)), (vec![0, 3, 0], c(-1.0))]).unwrap();
    VarietySpec::new(vec![p], 0, Some(CurveParam::monomial(vec![0, 2, 3]))).unwrap()
}

/// `J(s) = Σ_k c_k s^{-k}` as a form on `v`.
pub fn density(v: &VarietySpec, terms: &[(u32, f64)]) -> ResidualFormSpec {
    let src = terms
        .iter()
        .map(|(k, ck)| format!("{ck}/s^{k}"))
        .collect::<Vec<_>>()
        .join(" + ");
    ResidualFormSpec::leray(&src, v.weight()).unwrap()
}

/// Points `(1, ξ')` with `0.05 ≤ ‖ξ'‖ ≤ max_tail`, some rescaled by a random
/// complex factor.
pub fn dual_points(count: usize, max_tail: f64, seed: u64) -> Vec<Vec<Complex64>> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let dir: Vec<Complex64> = (0..2)
                .map(|_| ci(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
                .collect();
            let norm = dir.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            let len = r.random_range(0.05..max_tail);
            let mut xi = vec![c(1.0)];
            xi.extend(dir.iter().map(|v| v * (len / norm)));
            if i % 3 == 2 {
                let lambda = Complex64::from_polar(r.random_range(0.5..2.0), r.random_range(-PI..PI));
                xi.iter_mut().for_each(|v| *v *= lambda);
            }
            xi
        })
        .collect()
}

/// Roots of `Σ a_k s^k` as eigenvalues of the companion matrix.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut a = coeffs.to_vec();
    while a.last().is_some_and(|v| v.norm() == 0.0) {
        a.pop();
    }
    let d = a.len() - 1;
    let lead = a[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = c(1.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -a[i] / lead;
    }
    Schur::new(m).eigenvalues().unwrap().iter().copied().collect()
}

/// Coefficients of `q(s) = ⟨ξ·z(s)⟩` on a monomial curve.
pub fn section(powers: &[u32], xi: &[Complex64]) -> Vec<Complex64> {
    let deg = *powers.iter().max().unwrap() as usize;
    let mut q = vec![c(0.0); deg + 1];
    for (x, &p) in xi.iter().zip(powers) {
        q[p as usize] += x;
    }
    q
}

fn eval(coeffs: &[Complex64], s: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0), |acc, a| acc * s + a)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().enumerate().skip(1).map(|(k, a)| a * k as f64).collect()
}

/// Radon components for `J = Σ c_k s^{-k}` by partial fractions: the cycle
/// integral equals the sum of residues at the section points (the residue at
/// infinity vanishes for `k ≥ 2`).
pub fn radon_oracle(powers: &[u32], j: &[(u32, f64)], xi: &[Complex64]) -> Vec<Complex64> {
    let q = section(powers, xi);
    let dq = derivative(&q);
    let jf = |s: Complex64| j.iter().map(|&(k, ck)| s.powi(-(k as i32)) * ck).sum::<Complex64>();
    let rts = roots(&q);
    (0..xi.len())
        .map(|idx| {
            rts.iter()
                .map(|&s| s.powu(powers[idx]) * jf(s) / eval(&dq, s))
                .sum::<Complex64>()
                / TWO_PI_I
        })
        .collect()
}

/// `[s^k] log(q(s)/q(0))` via `q L' = q'`.
pub fn log_coefficient(q: &[Complex64], k: usize) -> Complex64 {
    let p: Vec<Complex64> = (0..=k).map(|i| q.get(i).copied().unwrap_or(c(0.0)) / q[0]).collect();
    let mut l = vec![c(0.0); k + 1];
    for n in 1..=k {
        let mut acc = p[n] * n as f64;
        for m in 1..n {
            acc -= l[m] * m as f64 * p[n - m];
        }
        l[n] = acc / n as f64;
    }
    l[k]
}

/// Potential `g` with `dg = R` and `g(1, 0, …, 0) = 0`:
/// `g = −(2πi)^{-1} Σ_k c_k [s^{k−1}] log(q/ξ_0)`.
pub fn potential_oracle(powers: &[u32], j: &[(u32, f64)], xi: &[Complex64]) -> Complex64 {
    let q = section(powers, xi);
    -j.iter()
        .map(|&(k, ck)| log_coefficient(&q, k as usize - 1) * ck)
        .sum::<Complex64>()
        / TWO_PI_I
}

/// `ρ` with `|u(ρ)| = target` for the monomial curve, by bisection.
pub fn bisect_radius(affine_exponents: &[i32], target: f64) -> f64 {
    let norm = |rho: f64| {
        affine_exponents
            .iter()
            .map(|&e| rho.powi(2 * e))
            .sum::<f64>()
            .sqrt()
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while norm(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if norm(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `min |ξ_0 + ⟨ξ', u⟩|` over `|u| ≤ radius` in `ℂ²`, by sampling the sphere
/// (the minimum modulus of an affine function sits on the boundary unless it
/// vanishes inside) followed by projected gradient steps.
pub fn min_on_ball(xi: &[Complex64], radius: f64, seed: u64) -> f64 {
    let mut r = rng(seed);
    let f = |u: &[Complex64]| (xi[0] + xi[1] * u[0] + xi[2] * u[1]).norm();
    let project = |u: &mut [Complex64]| {
        let n = u.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if n > radius {
            u.iter_mut().for_each(|v| *v *= radius / n);
        }
    };
    let mut best = f64::INFINITY;
    for _ in 0..64 {
        let mut u: Vec<Complex64> = (0..2)
            .map(|_| ci(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)) * radius)
            .collect();
        project(&mut u);
        let mut step = 0.25 * radius;
        for _ in 0..400 {
            let value = xi[0] + xi[1] * u[0] + xi[2] * u[1];
            // descent direction for |value|: move along −value·conj(ξ')
            let mut trial: Vec<Complex64> = u.clone();
            let g = [xi[1].conj() * value, xi[2].conj() * value];
            let gn = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
            if gn == 0.0 {
                break;
            }
            trial[0] -= g[0] * (step / gn);
            trial[1] -= g[1] * (step / gn);
            project(&mut trial);
            if f(&trial) < f(&u) {
                u = trial;
            } else {
                step *= 0.5;
            }
        }
        best = best.min(f(&u));
    }
    best
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// A supported point-residue case with its exact value.
pub struct ResidueCase {
    pub label: &'static str,
    pub system: Vec<Poly>,
    pub point: Vec<Complex64>,
    pub numerator: Poly,
    pub expected: Complex64,
}

/// Twelve triangular or monomial bases in one and two variables.
pub fn residue_cases() -> Vec<ResidueCase> {
    let case = |label, system: Vec<Poly>, point: Vec<f64>, numerator, expected: f64| ResidueCase {
        label,
        system,
        point: point.into_iter().map(c).collect(),
        numerator,
        expected: c(expected),
    };
    vec![
        case("z", vec![poly(1, &[(&[1], 1.0)])], vec![0.0], poly(1, &[(&[0], 1.0), (&[1], 2.0)]), 1.0),
        case("z^2", vec![poly(1, &[(&[2], 1.0)])], vec![0.0], poly(1, &[(&[0], 3.0), (&[1], 1.0)]), 1.0),
        case(
            "z^3 - z^4",
            vec![poly(1, &[(&[3], 1.0), (&[4], -1.0)])],
            vec![0.0],
            poly(1, &[(&[0], 1.0), (&[1], 1.0), (&[2], 1.0)]),
            3.0,
        ),
        case(
            "(z - 1/2)^2",
            vec![poly(1, &[(&[2], 1.0), (&[1], -1.0), (&[0], 0.25)])],
            vec![0.5],
            poly(1, &[(&[2], 1.0)]),
            1.0,
        ),
        case("z + z^2", vec![poly(1, &[(&[1], 1.0), (&[2], 1.0)])], vec![0.0], poly(1, &[(&[0], 1.0)]), 1.0),
        case(
            "(z1, z2)",
            vec![poly(2, &[(&[1, 0], 1.0)]), poly(2, &[(&[0, 1], 1.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[0, 0], 1.0)]),
            1.0,
        ),
        case(
            "(z1^2, z2)",
            vec![poly(2, &[(&[2, 0], 1.0)]), poly(2, &[(&[0, 1], 1.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[0, 0], 1.0), (&[1, 0], 2.0)]),
            2.0,
        ),
        case(
            "(z1 - z2^2, z2)",
            vec![poly(2, &[(&[1, 0], 1.0), (&[0, 2], -1.0)]), poly(2, &[(&[0, 1], 1.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[1, 0], 1.0), (&[0, 0], 1.0)]),
            1.0,
        ),
        case(
            "(2 z1, 3 z2)",
            vec![poly(2, &[(&[1, 0], 2.0)]), poly(2, &[(&[0, 1], 3.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[0, 0], 1.0)]),
            1.0 / 6.0,
        ),
        case(
            "(z1^2, z2^3)",
            vec![poly(2, &[(&[2, 0], 1.0)]), poly(2, &[(&[0, 3], 1.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[1, 2], 1.0), (&[0, 0], 1.0)]),
            1.0,
        ),
        case(
            "(z1 + z2^2, z2^2)",
            vec![poly(2, &[(&[1, 0], 1.0), (&[0, 2], 1.0)]), poly(2, &[(&[0, 2], 1.0)])],
            vec![0.0, 0.0],
            poly(2, &[(&[0, 1], 1.0), (&[1, 1], 1.0)]),
            1.0,
        ),
        case(
            "((z1 - 1)^2, z2 - z1 + 1)",
            vec![
                poly(2, &[(&[2, 0], 1.0), (&[1, 0], -2.0), (&[0, 0], 1.0)]),
                poly(2, &[(&[0, 1], 1.0), (&[1, 0], -1.0), (&[0, 0], 1.0)]),
            ],
            vec![1.0, 0.0],
            poly(2, &[(&[1, 0], 1.0), (&[0, 1], 1.0)]),
            2.0,
        ),
    ]
}
