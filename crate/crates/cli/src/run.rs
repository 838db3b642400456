//! Subcommand pipelines. Rows are evaluated in parallel and kept in input
//! order.

use std::time::Instant;

use fantappie_core::geometry::boundary_cycle;
use fantappie_core::polyalg::{cauchy_derivative, DiscStencil};
use fantappie_core::residues::{
    tube_integral, FormRepr, PairingNodes, ResidueError, TubeRegion,
};
use fantappie_core::transforms::{
    dual_path, euler_contraction, fantappie_transform, martineau_invert, potential,
    verify_system, FunctionalSpec, PointStatus, RadonEvaluator, TransformError,
};
use fantappie_core::Complex64;
use rayon::prelude::*;

use crate::config::{Functional, Scenario, ScheduleBlock};
use crate::report::{Metadata, ResultTable, Row, Status};
use crate::CliError;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Residue,
    Radon,
    Fantappie,
    Invert,
    Verify,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Residue => "residue",
            Subcommand::Radon => "radon",
            Subcommand::Fantappie => "fantappie",
            Subcommand::Invert => "invert",
            Subcommand::Verify => "verify",
        }
    }
}

fn setup<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// Per-row failure to status; anything that is neither an incidence nor a
/// convergence failure is reported as not stabilized with the error attached.
fn error_row(xi: &[Complex64], e: TransformError) -> Row {
    let status = match &e {
        TransformError::NearIncidence(_)
        | TransformError::NotInDualDomain(_)
        | TransformError::PathLeavesDomain
        | TransformError::KernelPole => Status::SkippedNearIncidence,
        _ => Status::NotStabilized,
    };
    Row::skipped(xi.to_vec(), status, e.to_string())
}

fn pairing(xi: &[Complex64], z: &[Complex64]) -> Complex64 {
    xi.iter().zip(z).map(|(a, b)| a * b).sum()
}

fn contraction(xi: &[Complex64], f: &[Complex64]) -> Complex64 {
    pairing(xi, f)
}

fn ok_row(xi: &[Complex64], f: Vec<Complex64>, euler: f64, within_tol: bool) -> Row {
    Row {
        xi: xi.to_vec(),
        f,
        pde_residual: Vec::new(),
        euler_contraction: euler,
        status: Status::Ok,
        within_tol,
        checks: Vec::new(),
        note: None,
    }
}

fn need_curve(s: &Scenario) -> Result<(&fantappie_core::residues::VarietySpec, &fantappie_core::residues::ResidualFormSpec), CliError> {
    match (&s.variety, &s.form) {
        (Some(v), Some(f)) => Ok((v, f)),
        _ => Err(CliError::Input("this subcommand needs `variety` and `form` blocks".into())),
    }
}

pub fn run(s: &Scenario, cmd: Subcommand) -> Result<ResultTable, CliError> {
    let start = Instant::now();
    let (rows, pde_columns) = match cmd {
        Subcommand::Residue => (residue(s)?, 0),
        Subcommand::Radon => (radon(s)?, 0),
        Subcommand::Fantappie => (fantappie(s)?, 0),
        Subcommand::Invert => (invert(s)?, 0),
        Subcommand::Verify => {
            let (v, _) = need_curve(s)?;
            (verify(s)?, v.m())
        }
    };
    Ok(ResultTable {
        metadata: Metadata {
            scenario: s.name.clone(),
            subcommand: cmd.name().into(),
            tol: s.tol,
            schedule: ScheduleBlock {
                base: s.schedule.base,
                kappa: s.schedule.kappa,
                halvings: s.schedule.halvings,
                tol: s.schedule.tol,
            },
            martineau_grid: s.martineau.grid,
            cycle_nodes: s.cycle_nodes,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
        dim: s.dom.n() + 1,
        pde_columns,
        rows,
    })
}

/// Pairing values `μ(z_j / ⟨ξ·z⟩)`; the contraction `Σ ξ_j f_j = μ(1)` must
/// vanish. Affine numerators on graph curves are also pushed through the tube
/// quadrature as an independent route.
fn residue(s: &Scenario) -> Result<Vec<Row>, CliError> {
    let (v, form) = need_curve(s)?;
    let param = v.param().ok_or_else(|| CliError::Input("variety.param is required".into()))?;
    let eval = RadonEvaluator::new(v, form, &s.dom, s.cycle_nodes).map_err(setup)?;
    let cycle = boundary_cycle(&s.dom, param, s.cycle_nodes).map_err(setup)?;
    let nodes = PairingNodes::new(v, form, &cycle).map_err(setup)?;
    let graph = param.powers()[1] == param.powers()[0] + 1 && v.m() == 1;
    let tube_route = match form.repr() {
        FormRepr::Affine(phi) if graph => Some(phi.clone()),
        _ => None,
    };
    let generators = v.affine_generators();
    Ok(s.points
        .par_iter()
        .map(|xi| {
            if let Err(e) = s.dom.dual_contains(xi).map_err(TransformError::from).and_then(|inside| {
                if inside { eval.check_incidence(xi) } else { Err(TransformError::NotInDualDomain(xi.clone())) }
            }) {
                return error_row(xi, e);
            }
            let f: Vec<Complex64> = (0..xi.len())
                .map(|j| nodes.apply(|z: &[Complex64]| z[j] / pairing(xi, z)))
                .collect();
            let euler = contraction(xi, &f).norm();
            let mut row = ok_row(xi, f, euler, euler <= s.tol);
            if let Some(phi) = &tube_route {
                let mut gap: f64 = 0.0;
                for j in 0..xi.len() {
                    let num = |u: &[Complex64]| {
                        let z: Vec<Complex64> = std::iter::once(Complex64::new(1.0, 0.0)).chain(u.iter().copied()).collect();
                        z[j] / pairing(xi, &z) * phi.eval(u)
                    };
                    let region = TubeRegion::Fibered { base_var: 0, cycle: &cycle };
                    match tube_integral(&generators, &num, region, &s.schedule) {
                        Ok(out) => {
                            let scale = row.f[j].norm().max(1.0);
                            gap = gap.max((out.value / TWO_PI_I - row.f[j]).norm() / scale);
                        }
                        Err(e @ (ResidueError::NotStabilized { .. } | ResidueError::QuadratureNotConverged { .. })) => {
                            return Row::skipped(xi.clone(), Status::NotStabilized, e.to_string());
                        }
                        Err(e) => return error_row(xi, e.into()),
                    }
                }
                row.within_tol &= gap <= s.tol;
                row.checks.push(("tube_relative_gap".into(), gap));
            }
            row
        })
        .collect())
}

fn radon(s: &Scenario) -> Result<Vec<Row>, CliError> {
    let (v, form) = need_curve(s)?;
    let eval = RadonEvaluator::new(v, form, &s.dom, s.cycle_nodes).map_err(setup)?;
    Ok(s.points
        .par_iter()
        .map(|xi| match eval.eval(xi) {
            Ok(f) => {
                let euler = euler_contraction(&f).norm();
                let norm = f.norm();
                let mut pass = euler <= s.tol;
                if s.expect_zero {
                    pass &= norm <= s.tol;
                }
                let mut row = ok_row(xi, f.components, euler, pass);
                row.checks.push(("norm".into(), norm));
                row
            }
            Err(e) => error_row(xi, e),
        })
        .collect())
}

fn build_functional(s: &Scenario) -> Result<FunctionalSpec, CliError> {
    match &s.functional {
        Some(Functional::PointMass(z)) => FunctionalSpec::point_mass(&s.dom, z.clone()).map_err(setup),
        Some(Functional::BoundaryResidue { cycle_nodes }) => {
            let (v, form) = need_curve(s)?;
            FunctionalSpec::boundary_residue(v, form, &s.dom, *cycle_nodes).map_err(setup)
        }
        Some(Functional::Martineau { g }) => {
            let g = g.clone();
            let field = move |x: &[Complex64]| g.eval(x);
            martineau_invert(&field, None, &s.dom, s.martineau)
                .map(FunctionalSpec::Martineau)
                .map_err(setup)
        }
        None => Err(CliError::Input("this subcommand needs a `functional` block".into())),
    }
}

/// `F[μ]`; checks `Σ ξ_j f_j = μ(1)` and, for boundary residues, agreement
/// with `(2πi)^{m+1}` times the Radon transform.
fn fantappie(s: &Scenario) -> Result<Vec<Row>, CliError> {
    let mu = build_functional(s)?;
    let mass = mu.apply(&|_: &[Complex64]| Complex64::new(1.0, 0.0)).map_err(setup)?;
    let radon = match (&s.functional, &s.variety, &s.form) {
        (Some(Functional::BoundaryResidue { .. }), Some(v), Some(form)) => {
            Some(RadonEvaluator::new(v, form, &s.dom, s.cycle_nodes).map_err(setup)?)
        }
        _ => None,
    };
    Ok(s.points
        .par_iter()
        .map(|xi| {
            let f = match fantappie_transform(&mu, xi) {
                Ok(f) => f,
                Err(e) => return error_row(xi, e),
            };
            let contraction = euler_contraction(&f);
            let euler_gap = (contraction - mass).norm() / mass.norm().max(1.0);
            let mut row = ok_row(xi, f.components.clone(), contraction.norm(), euler_gap <= s.tol);
            row.checks.push(("euler_minus_mass".into(), euler_gap));
            if let Some(eval) = &radon {
                match eval.eval(xi) {
                    Ok(r) => {
                        let m = s.variety.as_ref().map_or(1, |v| v.m()) as i32;
                        let scaled = r.scale(TWO_PI_I.powi(m + 1));
                        let gap = scaled
                            .components
                            .iter()
                            .zip(&f.components)
                            .map(|(a, b)| (a - b).norm())
                            .fold(0.0, f64::max)
                            / f.norm().max(1.0);
                        row.within_tol &= gap <= s.tol;
                        row.checks.push(("radon_compatibility".into(), gap));
                    }
                    Err(e) => return error_row(xi, e),
                }
            }
            row
        })
        .collect())
}

/// `F[μ^g]` against `dg` from Cauchy derivatives of `g`.
fn invert(s: &Scenario) -> Result<Vec<Row>, CliError> {
    let g = match &s.functional {
        Some(Functional::Martineau { g }) => g.clone(),
        _ => return Err(CliError::Input("invert needs a martineau functional".into())),
    };
    let mu = build_functional(s)?;
    Ok(s.points
        .par_iter()
        .map(|xi| {
            let f = match fantappie_transform(&mu, xi) {
                Ok(f) => f,
                Err(e) => return error_row(xi, e),
            };
            let scale = xi.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let dg: Vec<Complex64> = (0..xi.len())
                .map(|j| {
                    let st = DiscStencil::sample(&[xi[j]], &[1e-2 * scale], 16, |t| {
                        let mut x = xi.clone();
                        x[j] = t[0];
                        g.eval(&x)
                    })
                    .expect("valid stencil shape");
                    cauchy_derivative(&st, &[1]).expect("first order on 16 nodes")
                })
                .collect();
            let dg_norm = dg.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let err = f
                .components
                .iter()
                .zip(&dg)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
                / dg_norm.max(f64::MIN_POSITIVE);
            let euler = euler_contraction(&f).norm();
            let mut row = ok_row(xi, f.components, euler, err <= s.tol);
            row.checks.push(("dg_relative_error".into(), err));
            row
        })
        .collect())
}

/// Radon transform, its potential along a path in the dual domain, and the
/// residuals `P_k(∂/∂ξ) g`.
fn verify(s: &Scenario) -> Result<Vec<Row>, CliError> {
    let (v, form) = need_curve(s)?;
    let eval = RadonEvaluator::new(v, form, &s.dom, s.cycle_nodes).map_err(setup)?;
    let dom = s.dom;
    let g = |x: &[Complex64]| potential(&eval, &dom, &dual_path(x));
    Ok(s.points
        .par_iter()
        .map(|xi| {
            let f = match eval.eval(xi) {
                Ok(f) => f,
                Err(e) => return error_row(xi, e),
            };
            let report = match verify_system(&g, v.generators(), std::slice::from_ref(xi), &dom) {
                Ok(mut r) => r.remove(0),
                Err(e) => return error_row(xi, e),
            };
            if report.status == PointStatus::Skipped {
                return Row::skipped(
                    xi.clone(),
                    Status::SkippedNearIncidence,
                    "no derivative stencil fits in the dual domain".into(),
                );
            }
            let euler = euler_contraction(&f).norm();
            let pass = euler <= s.tol && report.relative.iter().all(|r| *r <= s.tol);
            let mut row = ok_row(xi, f.components, euler, pass);
            row.pde_residual = report.relative;
            row.checks.push(("pde_scale".into(), report.scale));
            row
        })
        .collect())
}
