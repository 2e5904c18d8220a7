use crate::args::{with_suffix, Command, LinearArgs, MsdArgs, NonlinearArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::forcing::{forcing, forcing_with_derivative, parse_expr, sample_expr, Source};
use crate::manifest::{GridSpec, RunManifest};
use crate::series::{read_samples, render_csv, uniform_grid, write_series, write_text, Format};
use cfode_core::expr::{ExprError, Vars};
use cfode_core::linear::{discriminant_case, solve};
use cfode_core::msd::{consistent_start, msd_residual, solve_msd};
use cfode_core::nonlinear::picard_solve;
use cfode_core::operator::cf_d_beta;
use cfode_core::{CfOrder, Error, Grid, GridFunction, LinearProblem, MsdParams, NonlinearProblem};
use serde_json::{json, Value};
use std::cell::RefCell;
use std::path::PathBuf;

/// What a finished command hands back for printing and for its manifest.
#[derive(Debug, Clone)]
pub struct Outcome {
    /// The command actually run, with every default resolved.
    pub command: Command,
    pub report: Value,
    pub grid: GridSpec,
    pub outputs: Vec<PathBuf>,
}

pub fn execute(command: &Command) -> CliResult<Outcome> {
    match command {
        Command::SolveLinear(a) => solve_linear(a),
        Command::SolveNonlinear(a) => solve_nonlinear(a),
        Command::SolveMsd(a) => solve_msd_cmd(a),
        Command::Verify(a) => verify(a),
        Command::Replay(r) => {
            let manifest = RunManifest::load(&r.manifest)?;
            let mut recorded = manifest.command;
            if matches!(recorded, Command::Replay(_)) {
                return Err(CliError::validation("manifest", "a manifest cannot record a replay"));
            }
            if let Some(out) = &r.out {
                recorded.set_out(out.clone());
            }
            execute(&recorded)
        }
    }
}

fn order(flag: &'static str, alpha: f64) -> CliResult<CfOrder> {
    let order = CfOrder::new(alpha).map_err(|e| CliError::validation(flag, e))?;
    order.kernel_rate().map_err(|e| CliError::validation(flag, e))?;
    Ok(order)
}

fn grid(t0: f64, t1: f64, n: usize, span_flag: &'static str) -> CliResult<Grid> {
    if n < 4 {
        return Err(CliError::validation("--n", format!("need at least 4 nodes, got {n}")));
    }
    Grid::new(t0, t1, n).map_err(|e| CliError::validation(span_flag, e))
}

fn finite(flag: &'static str, v: f64) -> CliResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::validation(flag, format!("must be finite, got {v}")))
    }
}

fn solve_linear(a: &LinearArgs) -> CliResult<Outcome> {
    let order = order("--alpha", a.alpha)?;
    let lambda = finite("--lambda", a.lambda)?;
    finite("--a", a.a)?;
    let grid = grid(a.a, a.t1, a.n, "--t1")?;
    let source = Source::pick(("--f", a.f.as_ref()), ("--f-csv", a.f_csv.as_ref()))?;
    let (f, f_prime) = forcing_with_derivative(&source, grid)?;
    let problem = LinearProblem::new(
        order,
        lambda,
        f,
        f_prime,
        finite("--u0", a.u0)?,
        finite("--du0", a.du0)?,
    )?;
    let (discriminant, _) = discriminant_case(order, lambda)?;
    let solution = solve(&problem)?;
    write_series(&a.out, "u", &solution.u, a.format)?;
    let report = json!({
        "command": "solve-linear",
        "case": solution.case_tag.as_str(),
        "discriminant": discriminant,
        "constants": [solution.constants.0, solution.constants.1],
        "residual_max_norm": solution.residual_norm,
        "n": grid.len(),
        "out": a.out,
    });
    Ok(Outcome {
        command: Command::SolveLinear(a.clone()),
        report,
        grid: GridSpec::from(grid),
        outputs: vec![a.out.clone()],
    })
}

fn solve_nonlinear(a: &NonlinearArgs) -> CliResult<Outcome> {
    let order = order("--alpha", a.alpha)?;
    let expr = parse_expr("--phi", &a.phi, Vars::TU)?;
    let failure: RefCell<Option<ExprError>> = RefCell::new(None);
    let phi = |t: f64, u: f64| match expr.eval(t, Some(u)) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    if a.n < 4 {
        return Err(CliError::validation(
            "--n",
            format!("need at least 4 nodes, got {}", a.n),
        ));
    }
    let problem = NonlinearProblem::new(order, a.horizon, a.n, phi, a.l1, a.l2, a.u0, a.u1).map_err(|e| {
        CliError::from_setup(e, |name| match name {
            "T" => "--T",
            "L1" => "--L1",
            "L2" => "--L2",
            "U0" => "--U0",
            "U1" => "--U1",
            "order" => "--alpha",
            _ => "--n",
        })
    })?;
    if !(a.tol > 0.0) {
        return Err(CliError::validation(
            "--tol",
            format!("must be positive, got {}", a.tol),
        ));
    }
    let (u, state) = picard_solve(&problem, a.tol, a.max_iter).map_err(|e| match (e, failure.take()) {
        (Error::NonFinite { .. }, Some(source)) => CliError::Domain {
            flag: "--phi".into(),
            source,
        },
        (e, _) => CliError::Solver(e),
    })?;
    write_series(&a.out, "u", &u, Format::Csv)?;
    let report = json!({
        "command": "solve-nonlinear",
        "q": state.contraction_factor,
        "iterations": state.iteration_count,
        "final_diff": state.successive_diffs.last().copied().unwrap_or(0.0),
        "error_bound": state.error_bound(),
        "successive_diffs": state.successive_diffs,
        "n": problem.grid.len(),
        "out": a.out,
    });
    Ok(Outcome {
        command: Command::SolveNonlinear(a.clone()),
        report,
        grid: GridSpec::from(problem.grid),
        outputs: vec![a.out.clone()],
    })
}

fn solve_msd_cmd(a: &MsdArgs) -> CliResult<Outcome> {
    let params = MsdParams::new(a.m, a.delta, a.k, a.sigma, a.gamma).map_err(|e| {
        CliError::from_setup(e, |name| match name {
            "m" => "--m",
            "delta" => "--delta",
            "k" => "--k",
            "sigma" => "--sigma",
            _ => "--gamma",
        })
    })?;
    let grid = grid(0.0, a.t1, a.n, "--t1")?;
    let source = Source::pick(("--F", a.forcing.as_ref()), ("--F-csv", a.forcing_csv.as_ref()))?;
    let force = forcing(&source, grid)?;
    let consistent = consistent_start(&params, &force);
    let x0 = finite("--x0", a.x0.unwrap_or(consistent))?;
    let (kernel_a, kernel_b) = params.kernel_coefficients()?;
    let x = solve_msd(&params, &force, x0)?;
    let residual = msd_residual(&params, &x, &force)?.max_norm();
    write_series(&a.out, "x", &x, Format::Csv)?;
    let report = json!({
        "command": "solve-msd",
        "A": kernel_a,
        "B": kernel_b,
        "solvability_denominator": params.solvability_denominator()?,
        "residual_max_norm": residual,
        "max_abs_forcing": force.max_norm(),
        "x0": x0,
        "consistent_x0": consistent,
        "n": grid.len(),
        "out": a.out,
    });
    let sidecar = with_suffix(&a.out, ".report.json");
    write_text(
        &sidecar,
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("plain JSON")),
    )?;
    Ok(Outcome {
        command: Command::SolveMsd(a.clone()),
        report,
        grid: GridSpec::from(grid),
        outputs: vec![a.out.clone(), sidecar],
    })
}

fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    let samples = read_samples(&a.solution_csv, "--solution-csv")?;
    let grid = uniform_grid(&samples).map_err(|m| CliError::validation("--solution-csv", m))?;
    if grid.len() < 4 {
        return Err(CliError::validation("--solution-csv", "need at least 4 rows"));
    }
    let order = order("--alpha", a.alpha)?;
    let lambda = finite("--lambda", a.lambda)?;
    let f = sample_expr("--f", &parse_expr("--f", &a.f, Vars::T)?, grid)?;
    let u = GridFunction::new(grid, samples.y)?;
    let lhs = cf_d_beta(&u, order, grid.t0())?;
    let residual = GridFunction::new(
        grid,
        lhs.values()
            .iter()
            .zip(u.values())
            .zip(f.values())
            .map(|((d, u), f)| d - lambda * u - f)
            .collect(),
    )?;
    let out = a.residual_path();
    write_text(&out, &render_csv("residual", &residual))?;
    let report = json!({
        "command": "verify",
        "residual_max_norm": residual.max_norm(),
        "max_abs_forcing": f.max_norm(),
        "n": grid.len(),
        "out": out,
    });
    Ok(Outcome {
        command: Command::Verify(a.clone()),
        report,
        grid: GridSpec::from(grid),
        outputs: vec![out],
    })
}
