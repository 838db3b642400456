//! Scenario files: JSON with the blocks below. Unknown fields are rejected.
//!
//! ```json
//! {
//!   "name": "conic",
//!   "domain": { "kind": "ball_complement", "radius": 1.0, "delta": 0.0 },
//!   "variety": {
//!     "generators": [[[[1, 0, 1], [1.0, 0.0]], [[0, 2, 0], [-1.0, 0.0]]]],
//!     "weight": -1,
//!     "param": { "kind": "monomial_curve", "powers": [0, 1, 2] }
//!   },
//!   "form": { "leray": "1/s^3 + 1/s^4" },
//!   "functional": { "kind": "boundary_residue" },
//!   "points": [[[1.0, 0.0], [0.2, 0.1], [0.0, -0.1]]],
//!   "tol": 1e-6
//! }
//! ```
//!
//! Command-line flags override the matching file values, which override the
//! defaults.

use std::path::{Path, PathBuf};

use fantappie_core::expr::Expr;
use fantappie_core::geometry::{CurveParam, DomainSpec};
use fantappie_core::polyalg::{HomPoly, TermLiteral};
use fantappie_core::residues::{AdmissibleSchedule, ResidualFormSpec, VarietySpec};
use fantappie_core::transforms::{MartineauOptions, DEFAULT_CYCLE_NODES};
use fantappie_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub domain: DomainBlock,
    #[serde(default)]
    pub variety: Option<VarietyBlock>,
    #[serde(default)]
    pub form: Option<FormBlock>,
    #[serde(default)]
    pub functional: Option<FunctionalBlock>,
    pub points: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub schedule: Option<ScheduleBlock>,
    /// Martineau angular grid.
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub cycle_nodes: Option<usize>,
    /// `radon`: additionally require `‖f‖ ≤ tol`.
    #[serde(default)]
    pub expect_zero: bool,
    #[serde(default)]
    pub output: Option<OutputBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainBlock {
    BallComplement { radius: f64, #[serde(default)] delta: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyBlock {
    pub generators: Vec<Vec<TermLiteral>>,
    pub weight: i32,
    #[serde(default)]
    pub param: Option<ParamBlock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamBlock {
    MonomialCurve { powers: Vec<u32>, #[serde(default)] s_max: Option<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FormBlock {
    /// Density `J(s)` in the curve parameter.
    Leray(String),
    /// Numerator `φ(u_1, …, u_n)` in affine coordinates.
    AffineNumerator(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalBlock {
    PointMass { point: Vec<[f64; 2]> },
    BoundaryResidue { #[serde(default)] cycle_nodes: Option<usize> },
    /// `g` as an expression in `xi0, …, xin`.
    Martineau { g: String, #[serde(default)] nu: Option<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleBlock {
    pub base: f64,
    pub kappa: u32,
    pub halvings: u32,
    pub tol: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub formats: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Values that may come from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub kappa: Option<u32>,
    pub grid: Option<usize>,
    pub formats: Option<Vec<Format>>,
}

/// A validated scenario with every reference resolved.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub dom: DomainSpec,
    pub variety: Option<VarietySpec>,
    pub form: Option<ResidualFormSpec>,
    pub functional: Option<Functional>,
    pub points: Vec<Vec<Complex64>>,
    pub tol: f64,
    pub schedule: AdmissibleSchedule,
    pub martineau: MartineauOptions,
    pub cycle_nodes: usize,
    pub expect_zero: bool,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
}

#[derive(Debug, Clone)]
pub enum Functional {
    PointMass(Vec<Complex64>),
    BoundaryResidue { cycle_nodes: usize },
    Martineau { g: Expr },
}

fn complex(v: &[f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn invalid(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{field}: {message}"))
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| {
        CliError::Input(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    resolve(file, overrides)
}

pub fn resolve(file: ScenarioFile, overrides: &Overrides) -> Result<Scenario, CliError> {
    let variety = match &file.variety {
        Some(block) => {
            let generators = block
                .generators
                .iter()
                .enumerate()
                .map(|(k, terms)| {
                    HomPoly::from_literal(terms).map_err(|e| invalid(&format!("variety.generators[{k}]"), e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let param = block.param.as_ref().map(|p| match p {
                ParamBlock::MonomialCurve { powers, s_max } => CurveParam::MonomialCurve {
                    powers: powers.clone(),
                    s_max: *s_max,
                },
            });
            Some(VarietySpec::new(generators, block.weight, param).map_err(|e| invalid("variety", e))?)
        }
        None => None,
    };
    let n = match (&variety, file.points.first()) {
        (Some(v), _) => v.n(),
        (None, Some(p)) if !p.is_empty() => p.len() - 1,
        _ => match &file.functional {
            Some(FunctionalBlock::PointMass { point }) if !point.is_empty() => point.len() - 1,
            _ => 2,
        },
    };
    let dom = match file.domain {
        DomainBlock::BallComplement { radius, delta } => {
            DomainSpec::new(n, radius, delta).map_err(|e| invalid("domain", e))?
        }
    };
    let weight = variety.as_ref().map(|v| v.weight()).unwrap_or(0);
    let form = match &file.form {
        Some(FormBlock::Leray(src)) => {
            Some(ResidualFormSpec::leray(src, weight).map_err(|e| invalid("form.leray", e))?)
        }
        Some(FormBlock::AffineNumerator(src)) => Some(
            ResidualFormSpec::affine(src, n, weight).map_err(|e| invalid("form.affine_numerator", e))?,
        ),
        None => None,
    };
    let cycle_nodes = file.cycle_nodes.unwrap_or(DEFAULT_CYCLE_NODES);
    if cycle_nodes < 64 {
        return Err(invalid("cycle_nodes", "must be at least 64"));
    }
    let mut martineau = MartineauOptions::default();
    if let Some(grid) = overrides.grid.or(file.grid) {
        martineau.grid = grid;
    }
    let functional = match &file.functional {
        Some(FunctionalBlock::PointMass { point }) => {
            if point.len() != n + 1 {
                return Err(invalid("functional.point", format!("expected {} coordinates", n + 1)));
            }
            Some(Functional::PointMass(point.iter().map(complex).collect()))
        }
        Some(FunctionalBlock::BoundaryResidue { cycle_nodes: nodes }) => {
            Some(Functional::BoundaryResidue {
                cycle_nodes: nodes.unwrap_or(cycle_nodes),
            })
        }
        Some(FunctionalBlock::Martineau { g, nu }) => {
            let names: Vec<String> = (0..=n).map(|k| format!("xi{k}")).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let g = Expr::parse(g, &refs).map_err(|e| invalid("functional.g", e))?;
            if let Some(nu) = nu {
                martineau.nu = *nu;
            }
            Some(Functional::Martineau { g })
        }
        None => None,
    };
    let points: Vec<Vec<Complex64>> = file
        .points
        .iter()
        .map(|p| p.iter().map(complex).collect())
        .collect();
    for (i, p) in points.iter().enumerate() {
        if p.len() != n + 1 {
            return Err(invalid(
                &format!("points[{i}]"),
                format!("expected {} coordinates, found {}", n + 1, p.len()),
            ));
        }
    }
    let tol = overrides.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let base = file.schedule.map_or(AdmissibleSchedule::default(), |s| AdmissibleSchedule {
        base: s.base,
        kappa: s.kappa,
        halvings: s.halvings,
        tol: s.tol,
    });
    let schedule = AdmissibleSchedule::new(
        base.base,
        overrides.kappa.unwrap_or(base.kappa),
        base.halvings,
        base.tol,
    )
    .map_err(|e| invalid("schedule", e))?;
    let output = file.output.unwrap_or(OutputBlock { dir: None, formats: None });
    let out_dir = overrides
        .out
        .clone()
        .or(output.dir)
        .unwrap_or_else(|| PathBuf::from("out"));
    let formats = overrides
        .formats
        .clone()
        .or(output.formats)
        .unwrap_or_else(|| vec![Format::Csv, Format::Json]);
    if formats.is_empty() {
        return Err(invalid("output.formats", "at least one format is required"));
    }
    Ok(Scenario {
        name: file.name,
        dom,
        variety,
        form,
        functional,
        points,
        tol,
        schedule,
        martineau,
        cycle_nodes,
        expect_zero: file.expect_zero,
        out_dir,
        formats,
    })
}
