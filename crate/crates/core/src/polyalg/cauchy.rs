//! Derivatives of sampled holomorphic functions by discrete Cauchy integrals
//! over a polydisc.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::PolyError;

/// Samples of a function on the torus `{c_i + r_i·ω^{j_i}}`, `ω = e^{2πi/N}`.
///
/// Samples are stored with the last axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscStencil {
    center: Vec<Complex64>,
    radii: Vec<f64>,
    nodes: usize,
    samples: Vec<Complex64>,
}

impl DiscStencil {
    /// Coordinates of every stencil node, in sample order.
    pub fn node_points(center: &[Complex64], radii: &[f64], nodes: usize) -> Vec<Vec<Complex64>> {
        let k = center.len();
        let total = nodes.pow(k as u32);
        let roots: Vec<Complex64> = (0..nodes)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64))
            .collect();
        (0..total)
            .map(|flat| {
                let mut rest = flat;
                let mut point = vec![Complex64::new(0.0, 0.0); k];
                for axis in (0..k).rev() {
                    let j = rest % nodes;
                    rest /= nodes;
                    point[axis] = center[axis] + roots[j] * radii[axis];
                }
                point
            })
            .collect()
    }

    fn check_shape(center: &[Complex64], radii: &[f64], nodes: usize) -> Result<(), PolyError> {
        if nodes < 8 || nodes % 2 != 0 {
            return Err(PolyError::BadNodeCount(nodes));
        }
        if radii.len() != center.len() {
            return Err(PolyError::DimensionMismatch {
                expected: center.len(),
                found: radii.len(),
            });
        }
        Ok(())
    }

    pub fn sample(
        center: &[Complex64],
        radii: &[f64],
        nodes: usize,
        f: impl Fn(&[Complex64]) -> Complex64,
    ) -> Result<Self, PolyError> {
        Self::try_sample(center, radii, nodes, |z| Ok::<_, PolyError>(f(z)))
    }

    /// Like [`DiscStencil::sample`] for a fallible function; the first error
    /// aborts sampling.
    pub fn try_sample<E>(
        center: &[Complex64],
        radii: &[f64],
        nodes: usize,
        mut f: impl FnMut(&[Complex64]) -> Result<Complex64, E>,
    ) -> Result<Self, E>
    where
        E: From<PolyError>,
    {
        Self::check_shape(center, radii, nodes)?;
        let samples = Self::node_points(center, radii, nodes)
            .iter()
            .map(|p| f(p))
            .collect::<Result<Vec<_>, E>>()?;
        Ok(DiscStencil {
            center: center.to_vec(),
            radii: radii.to_vec(),
            nodes,
            samples,
        })
    }

    pub fn from_samples(
        center: Vec<Complex64>,
        radii: Vec<f64>,
        nodes: usize,
        samples: Vec<Complex64>,
    ) -> Result<Self, PolyError> {
        Self::check_shape(&center, &radii, nodes)?;
        let expected = nodes.pow(center.len() as u32);
        if samples.len() != expected {
            return Err(PolyError::IncompleteStencil {
                expected,
                found: samples.len(),
            });
        }
        Ok(DiscStencil {
            center,
            radii,
            nodes,
            samples,
        })
    }

    pub fn center(&self) -> &[Complex64] {
        &self.center
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Largest sampled modulus.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `0.1·|c_i|` per coordinate, floored at 0.05.
pub fn default_radii(center: &[Complex64]) -> Vec<f64> {
    center.iter().map(|c| (0.1 * c.norm()).max(0.05)).collect()
}

/// `∂^α g` at the stencil center, one exponent per stencil axis.
pub fn cauchy_derivative(stencil: &DiscStencil, order: &[u32]) -> Result<Complex64, PolyError> {
    let k = stencil.center.len();
    if order.len() != k {
        return Err(PolyError::DimensionMismatch {
            expected: k,
            found: order.len(),
        });
    }
    let n = stencil.nodes;
    if let Some(&bad) = order.iter().find(|&&a| 2 * a as usize >= n) {
        return Err(PolyError::OrderTooHigh {
            order: bad,
            limit: n / 2,
        });
    }
    // per-axis twiddles ω^{-j·α}
    let twiddles: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&a| {
            (0..n)
                .map(|j| Complex64::from_polar(1.0, -2.0 * PI * (j * a as usize) as f64 / n as f64))
                .collect()
        })
        .collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (flat, g) in stencil.samples.iter().enumerate() {
        let mut rest = flat;
        let mut w = Complex64::new(1.0, 0.0);
        for axis in (0..k).rev() {
            w *= twiddles[axis][rest % n];
            rest /= n;
        }
        acc += g * w;
    }
    let mut scale = 1.0 / (n as f64).powi(k as i32);
    for (axis, &a) in order.iter().enumerate() {
        let fact: f64 = (1..=a).map(f64::from).product();
        scale *= fact / stencil.radii[axis].powi(a as i32);
    }
    Ok(acc * scale)
}

/// Integer `w` with `f(λz) = λ^w f(z)` at every probe point.
///
/// Probes where `f` vanishes are skipped; if every probe vanishes the result is
/// `NotHomogeneous` since no exponent is determined.
pub fn homogeneity_of(
    f: impl Fn(&[Complex64]) -> Complex64,
    probes: &[Vec<Complex64>],
) -> Result<i32, PolyError> {
    let scaled = |z: &[Complex64], lambda: Complex64| -> Vec<Complex64> {
        z.iter().map(|v| v * lambda).collect()
    };
    let mut found: Option<i32> = None;
    for z in probes {
        let base = f(z);
        if base.norm() < 1e-300 {
            continue;
        }
        let doubled = f(&scaled(z, Complex64::new(2.0, 0.0)));
        let w = ((doubled / base).norm().log2()).round();
        if !w.is_finite() || w.abs() > 64.0 {
            return Err(PolyError::NotHomogeneous);
        }
        let w = w as i32;
        // a complex λ separates λ^w from |λ|^w
        for lambda in [Complex64::new(2.0, 0.0), Complex64::from_polar(1.3, 0.7)] {
            let expected = base * lambda.powi(w);
            let got = f(&scaled(z, lambda));
            if (got - expected).norm() > 1e-8 * expected.norm().max(base.norm()) {
                return Err(PolyError::NotHomogeneous);
            }
        }
        match found {
            None => found = Some(w),
            Some(prev) if prev != w => return Err(PolyError::NotHomogeneous),
            Some(_) => {}
        }
    }
    found.ok_or(PolyError::NotHomogeneous)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn second_derivative_of_square() {
        let center = [c(0.0), c(0.0), c(0.0)];
        let st = DiscStencil::sample(&center, &[0.1, 0.1, 0.1], 16, |z| z[1] * z[1]).unwrap();
        let d = cauchy_derivative(&st, &[0, 2, 0]).unwrap();
        assert!((d - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn derivative_of_exponential() {
        let st = DiscStencil::sample(&[c(0.0)], &[0.1], 16, |z| z[0].exp()).unwrap();
        let d = cauchy_derivative(&st, &[1]).unwrap();
        assert!((d - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn mixed_derivative_of_reciprocal() {
        let center = [c(1.0), c(0.0), c(1.0)];
        let radii = default_radii(&center);
        let st = DiscStencil::sample(&center, &radii, 16, |z| (z[0] + z[2]).inv()).unwrap();
        // 2/(ξ0+ξ2)^3 = 1/4
        let d = cauchy_derivative(&st, &[1, 0, 1]).unwrap();
        assert!((d - c(0.25)).norm() < 1e-10, "{d}");
    }

    #[test]
    fn rejects_bad_stencils() {
        let st = DiscStencil::sample(&[c(0.0)], &[0.1], 8, |z| z[0]).unwrap();
        assert!(matches!(
            cauchy_derivative(&st, &[4]),
            Err(PolyError::OrderTooHigh { .. })
        ));
        assert!(matches!(
            DiscStencil::from_samples(vec![c(0.0)], vec![0.1], 8, vec![c(0.0); 7]),
            Err(PolyError::IncompleteStencil { .. })
        ));
        assert!(matches!(
            DiscStencil::sample(&[c(0.0)], &[0.1], 9, |z| z[0]),
            Err(PolyError::BadNodeCount(9))
        ));
    }

    #[test]
    fn homogeneity_examples() {
        let probes = vec![
            vec![c(1.0), c(0.3), Complex64::new(0.1, 0.2)],
            vec![Complex64::new(2.0, 1.0), c(-0.5), c(0.25)],
        ];
        assert_eq!(homogeneity_of(|x| x[1] / x[0], &probes), Ok(0));
        let z = [c(1.0), c(2.0), c(4.0)];
        let kernel = |x: &[Complex64]| z[1] / (x[0] * z[0] + x[1] * z[1] + x[2] * z[2]);
        assert_eq!(homogeneity_of(kernel, &probes), Ok(-1));
        assert_eq!(homogeneity_of(|x| x[0] * x[2] - x[1] * x[1], &probes), Ok(2));
        assert_eq!(
            homogeneity_of(|x| x[0] + x[1] * x[1], &probes),
            Err(PolyError::NotHomogeneous)
        );
    }
}
