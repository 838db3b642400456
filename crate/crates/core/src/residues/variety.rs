//! Complete-intersection data, numerator forms, and admissible tube schedules.

use num_complex::Complex64;

use super::ResidueError;
use crate::expr::Expr;
use crate::geometry::CurveParam;
use crate::polyalg::{HomPoly, Poly, RatFn};

/// Complete intersection `V = {P_1 = … = P_m = 0}` in `ℂP^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietySpec {
    n: usize,
    generators: Vec<HomPoly>,
    weight: i32,
    param: Option<CurveParam>,
    charts: Vec<LocalChart>,
    transitions: Vec<Transition>,
}

/// Local generators `F^{(α)}` on one chart, in that chart's affine variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalChart {
    pub label: String,
    pub generators: Vec<Poly>,
}

/// `F^{(from)} = A·F^{(to)}`, checked at the listed overlap points.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub matrix: Vec<Vec<Poly>>,
    pub overlap_samples: Vec<Vec<Complex64>>,
}

impl VarietySpec {
    /// Validates codimension, the weight `Σ d_k − (n+1)`, and that the
    /// generators vanish along the parametrization.
    pub fn new(
        generators: Vec<HomPoly>,
        weight: i32,
        param: Option<CurveParam>,
    ) -> Result<Self, ResidueError> {
        let first = generators
            .first()
            .ok_or_else(|| ResidueError::InvalidVariety("no generators".into()))?;
        let n = first.n();
        if generators.iter().any(|g| g.n() != n) {
            return Err(ResidueError::InvalidVariety(
                "generators live in different dimensions".into(),
            ));
        }
        if n < 2 || generators.len() > n - 1 {
            return Err(ResidueError::InvalidVariety(format!(
                "codimension {} needs ambient dimension at least {}",
                generators.len(),
                generators.len() + 1
            )));
        }
        let expected = generators.iter().map(|g| g.degree() as i32).sum::<i32>() - (n as i32 + 1);
        if weight != expected {
            return Err(ResidueError::WeightMismatch {
                expected,
                found: weight,
            });
        }
        if let Some(p) = &param {
            if p.n() != n {
                return Err(ResidueError::InvalidVariety(format!(
                    "parametrization has {} coordinates, expected {}",
                    p.n() + 1,
                    n + 1
                )));
            }
            for s in sample_parameters() {
                let z = p.point(s);
                let scale: f64 = z.iter().map(|v| v.norm()).fold(1.0, f64::max);
                for g in &generators {
                    let bound = g.poly().max_abs_coeff() * scale.powi(g.degree() as i32);
                    if g.eval(&z)?.norm() > 1e-10 * bound {
                        return Err(ResidueError::InvalidVariety(format!(
                            "generator does not vanish on the parametrization at s = {s}"
                        )));
                    }
                }
            }
        }
        Ok(VarietySpec {
            n,
            generators,
            weight,
            param,
            charts: Vec::new(),
            transitions: Vec::new(),
        })
    }

    /// Attaches chart data after checking every transition relation on its
    /// overlap samples.
    pub fn with_charts(
        mut self,
        charts: Vec<LocalChart>,
        transitions: Vec<Transition>,
    ) -> Result<Self, ResidueError> {
        let m = self.m();
        for chart in &charts {
            if chart.generators.len() != m {
                return Err(ResidueError::InvalidVariety(format!(
                    "chart {} has {} generators, expected {m}",
                    chart.label,
                    chart.generators.len()
                )));
            }
        }
        for t in &transitions {
            let (Some(from), Some(to)) = (charts.get(t.from), charts.get(t.to)) else {
                return Err(ResidueError::InvalidVariety(
                    "transition refers to a missing chart".into(),
                ));
            };
            if t.matrix.len() != m || t.matrix.iter().any(|row| row.len() != m) {
                return Err(ResidueError::InvalidVariety(
                    "transition matrix has the wrong shape".into(),
                ));
            }
            for z in &t.overlap_samples {
                for k in 0..m {
                    let lhs = from.generators[k].eval(z)?;
                    let mut rhs = Complex64::new(0.0, 0.0);
                    for j in 0..m {
                        rhs += t.matrix[k][j].eval(z)? * to.generators[j].eval(z)?;
                    }
                    if (lhs - rhs).norm() > 1e-10 * (1.0 + lhs.norm()) {
                        return Err(ResidueError::InvalidVariety(format!(
                            "transition {} -> {} fails on the overlap",
                            from.label, to.label
                        )));
                    }
                }
            }
        }
        self.charts = charts;
        self.transitions = transitions;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[HomPoly] {
        &self.generators
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(HomPoly::degree).collect()
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn param(&self) -> Option<&CurveParam> {
        self.param.as_ref()
    }

    pub fn charts(&self) -> &[LocalChart] {
        &self.charts
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Generators restricted to the chart `z_0 = 1`.
    pub fn affine_generators(&self) -> Vec<Poly> {
        self.generators.iter().map(HomPoly::dehomogenize).collect()
    }
}

fn sample_parameters() -> [Complex64; 4] {
    [
        Complex64::from_polar(0.7, 0.3),
        Complex64::from_polar(1.3, 2.1),
        Complex64::from_polar(2.2, -1.4),
        Complex64::new(-0.45, 0.0),
    ]
}

/// How the numerator of the residual current is given.
#[derive(Debug, Clone, PartialEq)]
pub enum FormRepr {
    /// Density `J(s)` of the localized form `J(s) ds` on the curve.
    Leray(RatFn),
    /// Affine numerator `φ(u)`, localized through the Leray quotient.
    Affine(Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFormSpec {
    repr: FormRepr,
    weight: i32,
    label: String,
}

impl ResidualFormSpec {
    /// Parses `J` in the variable `s`; requires `J(s) = O(1/s²)` so that
    /// `J(s) ds` is holomorphic at the point at infinity of the curve.
    pub fn leray(source: &str, weight: i32) -> Result<Self, ResidueError> {
        let expr = Expr::parse(source, &["s"])?;
        let j = expr.to_ratfn(&[RatFn::power_of_s(1)])?;
        let mut spec = Self::leray_ratfn(j, weight)?;
        spec.label = source.to_string();
        Ok(spec)
    }

    pub fn leray_ratfn(j: RatFn, weight: i32) -> Result<Self, ResidueError> {
        if let Some(d) = j.degree_at_infinity() {
            if d > -2 {
                return Err(ResidueError::InvalidForm(format!(
                    "J(s) ds has a pole at s = ∞ (J decays like s^{d})"
                )));
            }
        }
        Ok(ResidualFormSpec {
            repr: FormRepr::Leray(j),
            weight,
            label: "J(s)".into(),
        })
    }

    /// Parses `φ(u_1, …, u_n)`.
    pub fn affine(source: &str, n: usize, weight: i32) -> Result<Self, ResidueError> {
        let names: Vec<String> = (1..=n).map(|k| format!("u{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let expr = Expr::parse(source, &refs)?;
        Ok(ResidualFormSpec {
            repr: FormRepr::Affine(expr),
            weight,
            label: source.to_string(),
        })
    }

    pub fn repr(&self) -> &FormRepr {
        &self.repr
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn check_compatible(&self, v: &VarietySpec) -> Result<(), ResidueError> {
        if self.weight != v.weight() {
            return Err(ResidueError::WeightMismatch {
                expected: v.weight(),
                found: self.weight,
            });
        }
        Ok(())
    }
}

/// Path `t ↦ (ε_1, …, ε_m)` with `ε_m = t` and `ε_j = ε_{j+1}^κ`, `t` halved
/// up to `halvings` times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibleSchedule {
    pub base: f64,
    pub kappa: u32,
    pub halvings: u32,
    pub tol: f64,
}

impl AdmissibleSchedule {
    pub fn new(base: f64, kappa: u32, halvings: u32, tol: f64) -> Result<Self, ResidueError> {
        if !(base > 0.0 && base < 1.0) {
            return Err(ResidueError::InvalidSchedule(format!(
                "base {base} must lie in (0, 1)"
            )));
        }
        if kappa < 2 {
            return Err(ResidueError::InvalidSchedule(format!(
                "hierarchy exponent {kappa} must be at least 2"
            )));
        }
        if halvings < 3 {
            return Err(ResidueError::InvalidSchedule(format!(
                "need at least 3 halvings, got {halvings}"
            )));
        }
        if !(tol > 0.0) {
            return Err(ResidueError::InvalidSchedule("tolerance must be positive".into()));
        }
        Ok(AdmissibleSchedule {
            base,
            kappa,
            halvings,
            tol,
        })
    }

    /// Tube radii at stage `stage` for `m` equations, smallest first.
    pub fn radii(&self, stage: u32, m: usize) -> Vec<f64> {
        let t = self.base / 2f64.powi(stage as i32);
        let mut eps = vec![0.0; m];
        let mut current = t;
        for k in (0..m).rev() {
            eps[k] = current;
            current = current.powi(self.kappa as i32);
        }
        eps
    }
}

impl Default for AdmissibleSchedule {
    fn default() -> Self {
        AdmissibleSchedule {
            base: 0.1,
            kappa: 2,
            halvings: 6,
            tol: 1e-9,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conic() -> HomPoly {
        HomPoly::from_terms(
            3,
            2,
            [
                (vec![1, 0, 1], Complex64::new(1.0, 0.0)),
                (vec![0, 2, 0], Complex64::new(-1.0, 0.0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validates_weight_and_param() {
        let ok = VarietySpec::new(vec![conic()], -1, Some(CurveParam::monomial(vec![0, 1, 2])));
        assert!(ok.is_ok());
        assert_eq!(
            VarietySpec::new(vec![conic()], 0, None),
            Err(ResidueError::WeightMismatch {
                expected: -1,
                found: 0
            })
        );
        let wrong = VarietySpec::new(vec![conic()], -1, Some(CurveParam::monomial(vec![0, 2, 3])));
        assert!(matches!(wrong, Err(ResidueError::InvalidVariety(_))));
    }

    #[test]
    fn leray_forms_must_decay() {
        assert!(ResidualFormSpec::leray("1/s^2", -1).is_ok());
        assert!(ResidualFormSpec::leray("1/s", -1).is_err());
        assert!(ResidualFormSpec::leray("0", -1).is_ok());
    }

    #[test]
    fn schedule_hierarchy() {
        let s = AdmissibleSchedule::new(0.1, 3, 4, 1e-8).unwrap();
        let r = s.radii(1, 2);
        assert_eq!(r[1], 0.05);
        assert!((r[0] - 0.05f64.powi(3)).abs() < 1e-18);
        assert!(AdmissibleSchedule::new(0.1, 1, 4, 1e-8).is_err());
        assert!(AdmissibleSchedule::new(0.1, 2, 2, 1e-8).is_err());
    }

    #[test]
    fn transitions_are_checked() {
        let v = VarietySpec::new(vec![conic()], -1, None).unwrap();
        let f = Poly::from_terms(2, [(vec![0, 1], Complex64::new(1.0, 0.0)), (vec![2, 0], Complex64::new(-1.0, 0.0))]).unwrap();
        let two_f = f.scale(Complex64::new(2.0, 0.0));
        let charts = vec![
            LocalChart { label: "a".into(), generators: vec![two_f] },
            LocalChart { label: "b".into(), generators: vec![f] },
        ];
        let sample = vec![vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.5)]];
        let good = Transition {
            from: 0,
            to: 1,
            matrix: vec![vec![Poly::constant(2, Complex64::new(2.0, 0.0))]],
            overlap_samples: sample.clone(),
        };
        assert!(v.clone().with_charts(charts.clone(), vec![good]).is_ok());
        let bad = Transition {
            from: 0,
            to: 1,
            matrix: vec![vec![Poly::constant(2, Complex64::new(3.0, 0.0))]],
            overlap_samples: sample,
        };
        assert!(v.with_charts(charts, vec![bad]).is_err());
    }
}
