//! Dense univariate polynomials and rational functions in the curve parameter.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::PolyError;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense polynomial with ascending coefficients, `c[k]` multiplying `s^k`.
///
/// Trailing zero coefficients are trimmed, so the zero polynomial has no
/// coefficients at all.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        UniPoly::new(vec![c])
    }

    /// `c·s^k`
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut v = vec![ZERO; k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Multiplicity of the root at `s = 0`.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * s + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, s: Complex64) -> (Complex64, Complex64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for c in self.coeffs.iter().rev() {
            dp = dp * s + p;
            p = p * s + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        (0..k).fold(UniPoly::constant(ONE), |acc, _| &acc * self)
    }

    /// Divides out `s^k` (the low `k` coefficients must be zero).
    fn shift_down(&self, k: usize) -> UniPoly {
        UniPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// All complex roots with multiplicity, by simultaneous Aberth iteration.
    pub fn roots(&self) -> Result<Vec<Complex64>, PolyError> {
        let Some(deg) = self.degree() else {
            return Ok(Vec::new());
        };
        let v = self.valuation();
        let mut roots = vec![ZERO; v];
        let reduced = self.shift_down(v);
        let d = deg - v;
        match d {
            0 => return Ok(roots),
            1 => {
                roots.push(-reduced.coeffs[0] / reduced.coeffs[1]);
                return Ok(roots);
            }
            _ => {}
        }
        roots.extend(aberth(&reduced)?);
        Ok(roots)
    }
}

fn aberth(p: &UniPoly) -> Result<Vec<Complex64>, PolyError> {
    let d = p.degree().expect("nonzero polynomial");
    let lead = p.coeffs[d];
    // Fujiwara-type bound on root moduli; start on a circle inside it.
    let bound = (0..d)
        .map(|k| (p.coeffs[k] / lead).norm().powf(1.0 / (d - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let lower = {
        let c0 = p.coeffs[0].norm();
        let tail = (1..=d).map(|k| p.coeffs[k].norm()).fold(0.0, f64::max);
        c0 / (c0 + tail)
    };
    let radius = 0.5 * (bound + lower);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let dp = p.derivative();
    let mut converged = false;
    for _ in 0..800 {
        let mut max_step = 0.0_f64;
        for i in 0..d {
            let pi = p.eval(z[i]);
            if pi == ZERO {
                continue;
            }
            let ratio = pi / dp.eval(z[i]);
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|r| !r.is_finite()) {
        return Err(PolyError::RootsNotConverged);
    }
    // Newton polish; harmless at multiple roots where the step is tiny anyway.
    for r in z.iter_mut() {
        for _ in 0..2 {
            let (f, df) = p.eval_with_derivative(*r);
            if df == ZERO {
                break;
            }
            let step = f / df;
            if step.is_finite() {
                *r -= step;
            }
        }
    }
    Ok(z)
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO)
                        + rhs.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(-ONE)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

/// Quotient `num/den` of univariate polynomials; no common-factor cancellation
/// beyond powers of `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFn {
    num: UniPoly,
    den: UniPoly,
}

impl RatFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let k = num.valuation().min(den.valuation());
        let num = if num.is_zero() { num } else { num.shift_down(k) };
        let den = den.shift_down(k);
        Some(RatFn { num, den })
    }

    pub fn poly(p: UniPoly) -> Self {
        RatFn {
            num: p,
            den: UniPoly::constant(ONE),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        RatFn::poly(UniPoly::constant(c))
    }

    /// `s^k` for any integer `k`.
    pub fn power_of_s(k: i32) -> Self {
        if k >= 0 {
            RatFn::poly(UniPoly::monomial(k as usize, ONE))
        } else {
            RatFn {
                num: UniPoly::constant(ONE),
                den: UniPoly::monomial((-k) as usize, ONE),
            }
        }
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// `deg num − deg den`; `None` for the zero function.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        let dd = self.den.degree().expect("nonzero denominator") as i64;
        Some(dn - dd)
    }

    /// Roots of the denominator, which contain every pole.
    pub fn pole_candidates(&self) -> Result<Vec<Complex64>, PolyError> {
        self.den.roots()
    }

    pub fn recip(&self) -> Option<RatFn> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn powi(&self, k: i32) -> Option<RatFn> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs();
        RatFn::new(base.num.pow(e), base.den.pow(e))
    }

    pub fn div(&self, rhs: &RatFn) -> Option<RatFn> {
        RatFn::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero");
        }
        RatFn::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("product of nonzero denominators")
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}
