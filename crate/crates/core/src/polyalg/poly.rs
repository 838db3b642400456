//! Sparse multivariate polynomials over the complex numbers.
//!
//! [`Poly`] is a general (not necessarily homogeneous) polynomial used for
//! affine-chart computations and truncated power series; [`HomPoly`] wraps it
//! with a fixed total degree and is what the projective code works with.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// Exponent vector of the single variable `var`.
    pub fn unit(len: usize, var: usize) -> Self {
        let mut e = vec![0; len];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = α_0!·α_1!·…`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&e| (1..=e).map(f64::from).product::<f64>())
            .product()
    }

    /// Indices of the variables with a nonzero exponent.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Value of the monomial `z^α`.
    pub fn monomial_at(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .filter(|(&e, _)| e > 0)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zi)| {
                acc * zi.powu(e)
            })
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// Sparse polynomial in `nvars` complex variables.
///
/// Exactly-zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(MultiIndex::zero(nvars), c);
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Poly::monomial(MultiIndex::unit(nvars, var), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(index: MultiIndex, c: Complex64) -> Self {
        let mut p = Poly::zero(index.len());
        p.add_term(index, c);
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            p.add_term(MultiIndex(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, index: MultiIndex, c: Complex64) {
        debug_assert_eq!(index.len(), self.nvars);
        let sum = self.coeff(&index) + c;
        if sum == Complex64::new(0.0, 0.0) {
            self.terms.remove(&index);
        } else {
            self.terms.insert(index, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, index: &MultiIndex) -> Complex64 {
        self.terms
            .get(index)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Largest total degree of a stored term; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    /// Smallest total degree of a stored term (the order of vanishing at 0).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).min()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|k| k.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|k| k.0[var] > 0)
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64, PolyError> {
        if z.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                found: z.len(),
            });
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(k, c)| c * k.monomial_at(z))
            .sum()
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, c) in &self.terms {
            let e = k.0[var];
            if e == 0 {
                continue;
            }
            let mut nk = k.clone();
            nk.0[var] -= 1;
            out.add_term(nk, c * f64::from(e));
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.degree() <= max_degree)
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        }
    }

    /// Product, discarding terms of total degree above `max_degree` when given.
    pub fn mul_truncated(&self, other: &Poly, max_degree: Option<u32>) -> Poly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if let Some(d) = max_degree {
                    if ka.degree() + kb.degree() > d {
                        continue;
                    }
                }
                out.add_term(ka.plus(kb), ca * cb);
            }
        }
        out
    }

    pub fn pow_truncated(&self, k: u32, max_degree: Option<u32>) -> Poly {
        let mut acc = Poly::constant(self.nvars, Complex64::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc.mul_truncated(self, max_degree);
        }
        acc
    }

    /// Power-series reciprocal up to total degree `max_degree`.
    pub fn series_inverse(&self, max_degree: u32) -> Result<Poly, PolyError> {
        let c0 = self.coeff(&MultiIndex::zero(self.nvars));
        if c0.norm() == 0.0 {
            return Err(PolyError::NotAUnit);
        }
        // 1/(c0 (1 + t)) = c0^{-1} Σ (-t)^k, t of order >= 1
        let inv0 = c0.inv();
        let t = (self - &Poly::constant(self.nvars, c0)).scale(inv0);
        let mut out = Poly::constant(self.nvars, inv0);
        let mut power = Poly::constant(self.nvars, Complex64::new(1.0, 0.0));
        for k in 1..=max_degree {
            power = power.mul_truncated(&t, Some(max_degree));
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            out = &out + &power.scale(inv0 * sign);
        }
        Ok(out.truncate(max_degree))
    }

    /// Translate: returns `q` with `q(z) = self(z + p)`.
    pub fn shift(&self, p: &[Complex64]) -> Poly {
        assert_eq!(p.len(), self.nvars);
        let mut out = Poly::zero(self.nvars);
        for (k, c) in &self.terms {
            // expand ∏ (z_i + p_i)^{e_i}
            let mut term = Poly::constant(self.nvars, *c);
            for (i, &e) in k.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let lin = &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, p[i]);
                term = term.mul_truncated(&lin.pow_truncated(e, None), None);
            }
            out = &out + &term;
        }
        out
    }

    /// Coefficients as a polynomial in `var`: `self = Σ_e c_e · var^e` with
    /// `c_e` free of `var`.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (k, c) in &self.terms {
            let e = k.0[var];
            let mut nk = k.clone();
            nk.0[var] = 0;
            out.entry(e)
                .or_insert_with(|| Poly::zero(self.nvars))
                .add_term(nk, *c);
        }
        out
    }

    /// Renames variable `i` to `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (k, c) in &self.terms {
            let mut nk = vec![0; self.nvars];
            for (i, &e) in k.0.iter().enumerate() {
                nk[perm[i]] = e;
            }
            out.add_term(MultiIndex(nk), *c);
        }
        out
    }

    /// Inserts a new variable at position `at` (all exponents 0).
    pub fn insert_var(&self, at: usize) -> Poly {
        let mut out = Poly::zero(self.nvars + 1);
        for (k, c) in &self.terms {
            let mut nk = k.0.clone();
            nk.insert(at, 0);
            out.add_term(MultiIndex(nk), *c);
        }
        out
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), *c);
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_truncated(rhs, None)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            for (i, &e) in k.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{i}")?,
                    _ => write!(f, "*z{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// One term of the config-file literal `[[e0,...,en], [re, im]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermLiteral(pub Vec<u32>, pub [f64; 2]);

/// Homogeneous polynomial in `n + 1` variables `z_0..z_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomPoly {
    poly: Poly,
    degree: u32,
}

impl HomPoly {
    pub fn new(poly: Poly, degree: u32) -> Result<Self, PolyError> {
        for (k, _) in poly.terms() {
            if k.degree() != degree {
                return Err(PolyError::DegreeMismatch {
                    term: k.exponents().to_vec(),
                    expected: degree,
                    found: k.degree(),
                });
            }
        }
        Ok(HomPoly { poly, degree })
    }

    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        HomPoly::new(Poly::from_terms(nvars, terms)?, degree)
    }

    /// Parses the literal term list; the degree is taken from the first term
    /// and every other term must match it.
    pub fn from_literal(terms: &[TermLiteral]) -> Result<Self, PolyError> {
        let first = terms.first().ok_or(PolyError::EmptyLiteral)?;
        let nvars = first.0.len();
        let degree = first.0.iter().sum();
        HomPoly::from_terms(
            nvars,
            degree,
            terms
                .iter()
                .map(|t| (t.0.clone(), Complex64::new(t.1[0], t.1[1]))),
        )
    }

    pub fn to_literal(&self) -> Vec<TermLiteral> {
        self.poly
            .terms()
            .map(|(k, c)| TermLiteral(k.exponents().to_vec(), [c.re, c.im]))
            .collect()
    }

    /// The pairing `⟨a·z⟩ = Σ a_k z_k` as a degree-1 form.
    pub fn linear_form(coeffs: &[Complex64]) -> Self {
        let n1 = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (MultiIndex::unit(n1, i).0, c));
        HomPoly::from_terms(n1, 1, terms).expect("linear terms have degree 1")
    }

    /// Ambient dimension `n` (the polynomial has `n + 1` variables).
    pub fn n(&self) -> usize {
        self.poly.nvars() - 1
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64, PolyError> {
        self.poly.eval(z)
    }

    /// `∂P/∂z_j` for every `j`; components may be the zero polynomial.
    pub fn grad(&self) -> Vec<HomPoly> {
        (0..self.poly.nvars())
            .map(|j| HomPoly {
                poly: self.poly.partial(j),
                degree: self.degree.saturating_sub(1),
            })
            .collect()
    }

    /// Restriction to the affine chart `z_0 = 1`, as a polynomial in `u_1..u_n`.
    pub fn dehomogenize(&self) -> Poly {
        let n = self.n();
        let mut out = Poly::zero(n);
        for (k, c) in self.poly.terms() {
            out.add_term(MultiIndex(k.exponents()[1..].to_vec()), *c);
        }
        out
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn conic() -> HomPoly {
        HomPoly::from_terms(3, 2, [(vec![1, 0, 1], c(1.0)), (vec![0, 2, 0], c(-1.0))]).unwrap()
    }

    fn cusp() -> HomPoly {
        HomPoly::from_terms(3, 3, [(vec![1, 0, 2], c(1.0)), (vec![0, 3, 0], c(-1.0))]).unwrap()
    }

    #[test]
    fn evaluates_fixture_polynomials() {
        assert_eq!(conic().eval(&[c(1.0), c(1.0), c(1.0)]).unwrap(), c(0.0));
        assert_eq!(conic().eval(&[c(1.0), c(0.0), c(1.0)]).unwrap(), c(1.0));
        let s = 2.0;
        let z = [c(1.0), c(s * s), c(s * s * s)];
        assert_eq!(cusp().eval(&z).unwrap(), c(0.0));
    }

    #[test]
    fn rejects_wrong_dimension() {
        assert_eq!(
            conic().eval(&[c(1.0), c(1.0)]),
            Err(PolyError::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn rejects_inhomogeneous_terms() {
        let err = HomPoly::from_terms(3, 2, [(vec![1, 0, 1], c(1.0)), (vec![0, 1, 0], c(1.0))]);
        assert!(matches!(err, Err(PolyError::DegreeMismatch { .. })));
    }

    #[test]
    fn gradient_of_conic() {
        let g = conic().grad();
        let z = [c(0.3), c(-1.1), c(2.0)];
        // (z2, -2 z1, z0)
        assert_eq!(g[0].eval(&z).unwrap(), z[2]);
        assert_eq!(g[1].eval(&z).unwrap(), z[1] * -2.0);
        assert_eq!(g[2].eval(&z).unwrap(), z[0]);
        assert!(g.iter().all(|p| p.degree() == 1));
    }

    #[test]
    fn gradient_of_linear_and_cusp() {
        let p = HomPoly::from_terms(3, 1, [(vec![0, 1, 0], c(1.0))]).unwrap();
        let g = p.grad();
        assert!(g[0].poly().is_zero());
        assert_eq!(g[1].eval(&[c(5.0), c(5.0), c(5.0)]).unwrap(), c(1.0));
        assert!(g[2].poly().is_zero());

        let at_cusp = [c(1.0), c(0.0), c(0.0)];
        for comp in cusp().grad() {
            assert_eq!(comp.eval(&at_cusp).unwrap(), c(0.0));
        }
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = Poly::from_terms(2, [(vec![1, 0], c(1.0)), (vec![1, 0], c(-1.0))]).unwrap();
        assert!(p.is_zero());
        let q = &Poly::var(2, 0) - &Poly::var(2, 0);
        assert_eq!(q.num_terms(), 0);
    }

    #[test]
    fn series_inverse_of_unit() {
        // 1/(1 - z) = 1 + z + z^2 + ...
        let u = &Poly::constant(1, c(1.0)) - &Poly::var(1, 0);
        let inv = u.series_inverse(5).unwrap();
        for k in 0..=5 {
            assert!((inv.coeff(&MultiIndex::new(vec![k])) - c(1.0)).norm() < 1e-15);
        }
        assert!(Poly::var(1, 0).series_inverse(3).is_err());
    }

    #[test]
    fn shift_translates() {
        let p = conic().poly().clone();
        let shift = [c(0.5), c(-1.0), c(2.0)];
        let q = p.shift(&shift);
        let z = [c(0.1), c(0.7), c(-0.4)];
        let zp: Vec<_> = z.iter().zip(&shift).map(|(a, b)| a + b).collect();
        assert!((q.eval(&z).unwrap() - p.eval(&zp).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn literal_round_trip() {
        let lit = conic().to_literal();
        assert_eq!(HomPoly::from_literal(&lit).unwrap(), conic());
        assert!(HomPoly::from_literal(&[]).is_err());
    }

    #[test]
    fn dehomogenized_conic() {
        // u2 - u1^2
        let f = conic().dehomogenize();
        assert_eq!(f.eval(&[c(3.0), c(9.0)]).unwrap(), c(0.0));
        assert_eq!(f.eval(&[c(0.0), c(2.0)]).unwrap(), c(2.0));
    }
}
