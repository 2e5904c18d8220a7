//! Forcing terms given as expressions in `t` or as sampled CSV files.

use crate::error::{CliError, CliResult};
use crate::series::read_samples;
use cfode_core::expr::{differentiate, parse, Expr, Var, Vars};
use cfode_core::quadrature::derivative;
use cfode_core::{Grid, GridFunction};
use std::path::Path;

pub enum Source<'a> {
    Expr { flag: &'static str, text: &'a str },
    Csv { flag: &'static str, path: &'a Path },
}

impl<'a> Source<'a> {
    /// Picks whichever of the two mutually exclusive flags was given.
    pub fn pick(
        expr: (&'static str, Option<&'a String>),
        csv: (&'static str, Option<&'a std::path::PathBuf>),
    ) -> CliResult<Self> {
        match (expr.1, csv.1) {
            (Some(text), None) => Ok(Source::Expr { flag: expr.0, text }),
            (None, Some(path)) => Ok(Source::Csv { flag: csv.0, path }),
            _ => Err(CliError::validation(
                expr.0,
                format!("exactly one of {} and {} is required", expr.0, csv.0),
            )),
        }
    }
}

pub fn parse_expr(flag: &'static str, text: &str, vars: Vars) -> CliResult<Expr> {
    parse(text, vars).map_err(|e| CliError::validation(flag, e))
}

pub fn sample_expr(flag: &'static str, expr: &Expr, grid: Grid) -> CliResult<GridFunction> {
    let values = grid
        .nodes()
        .map(|t| expr.eval(t, None))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|source| CliError::Domain {
            flag: flag.into(),
            source,
        })?;
    Ok(GridFunction::new(grid, values)?)
}

/// Forcing and its time derivative on `grid`.
///
/// Expressions are differentiated symbolically; sampled forcings are
/// interpolated linearly and differentiated numerically.
pub fn forcing_with_derivative(source: &Source, grid: Grid) -> CliResult<(GridFunction, GridFunction)> {
    match *source {
        Source::Expr { flag, text } => {
            let expr = parse_expr(flag, text, Vars::T)?;
            let d = differentiate(&expr, Var::T).map_err(|e| CliError::validation(flag, e))?;
            Ok((sample_expr(flag, &expr, grid)?, sample_expr(flag, &d, grid)?))
        }
        Source::Csv { .. } => {
            let f = forcing(source, grid)?;
            let df = derivative(&f)?;
            Ok((f, df))
        }
    }
}

pub fn forcing(source: &Source, grid: Grid) -> CliResult<GridFunction> {
    match *source {
        Source::Expr { flag, text } => sample_expr(flag, &parse_expr(flag, text, Vars::T)?, grid),
        Source::Csv { flag, path } => {
            let s = read_samples(path, flag)?;
            GridFunction::interpolate(grid, &s.t, &s.y).map_err(|e| CliError::validation(flag, e))
        }
    }
}
