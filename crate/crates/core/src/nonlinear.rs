//! Picard iteration for `D^β u = φ(t, u)` on `[0, T]` with `u(0) = U0`,
//! `u'(0) = U1`.
//!
//! The iteration map follows the repeated-root solution of the linear
//! problem with the forcing replaced by `φ(t, u(t))`:
//!
//! ```text
//! (N u)(t) = C1 + C2 t + t ∫_0^t w(s) ds - ∫_0^t s w(s) ds,
//! w = (1-α) dφ(t,u(t))/dt + α φ(t,u(t))
//! ```
//!
//! so that `(N u)'' = w`; `C1 = U0` and `C2 = U1` match the initial data.
//! `N` is a contraction in the sup-norm when
//! `q = 2T((1-α) L2 + α L1) < 1`, with `L1` and `L2` the Lipschitz constants
//! of `φ` and of `dφ/dt` in `u`.
//!
//! Like the linear solver, the fixed point satisfies the fractional equation
//! up to the transient `φ(0, U0) e^{-κt}`; it is exact when `φ(0, U0) = 0`.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::operator::CfOrder;
use crate::quadrature::{cumulative_integral, derivative};

/// Initial-value problem for `D^β u = φ(t, u)` on `[0, T]`.
pub struct NonlinearProblem<F> {
    pub order: CfOrder,
    pub horizon: f64,
    pub phi: F,
    pub l1: f64,
    pub l2: f64,
    pub u0: f64,
    pub u1: f64,
    /// Grid on `[0, T]`.
    pub grid: Grid,
}

impl<F: Fn(f64, f64) -> f64> NonlinearProblem<F> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(order: CfOrder, horizon: f64, n: usize, phi: F, l1: f64, l2: f64, u0: f64, u1: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidParameter {
                name: "T",
                reason: format!("must be positive, got {horizon}"),
            });
        }
        for (name, v) in [("L1", l1), ("L2", l2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be non-negative, got {v}"),
                });
            }
        }
        for (name, v) in [("U0", u0), ("U1", u1)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite".into(),
                });
            }
        }
        order.kernel_rate()?;
        let grid = Grid::new(0.0, horizon, n)?;
        grid.require(3)?;
        Ok(Self {
            order,
            horizon,
            phi,
            l1,
            l2,
            u0,
            u1,
            grid,
        })
    }

    /// The starting iterate `U0 + U1 t`.
    pub fn initial_iterate(&self) -> GridFunction {
        GridFunction::from_fn(self.grid, |t| self.u0 + self.u1 * t).expect("finite data")
    }
}

/// Record of a Picard run.
#[derive(Debug, Clone)]
pub struct PicardState {
    pub iterate: GridFunction,
    /// Number of applications of `N`.
    pub iteration_count: usize,
    /// Sup-norm of `u_{k+1} - u_k` per iteration.
    pub successive_diffs: Vec<f64>,
    pub contraction_factor: f64,
}

impl PicardState {
    /// Banach a-posteriori bound `q/(1-q) · |u_k - u_{k-1}|` on the distance
    /// to the fixed point.
    pub fn error_bound(&self) -> f64 {
        let q = self.contraction_factor;
        let last = self.successive_diffs.last().copied().unwrap_or(0.0);
        q / (1.0 - q) * last
    }
}

/// `q = 2T((1-α) L2 + α L1)`; the map is contractive iff `q < 1`.
pub fn contraction_check<F>(problem: &NonlinearProblem<F>) -> f64 {
    let alpha = problem.order.alpha();
    2.0 * problem.horizon * ((1.0 - alpha) * problem.l2 + alpha * problem.l1)
}

/// One application of the iteration map.
pub fn apply_n<F: Fn(f64, f64) -> f64>(problem: &NonlinearProblem<F>, u: &GridFunction) -> Result<GridFunction> {
    if u.grid() != &problem.grid {
        return Err(Error::GridMismatch);
    }
    let alpha = problem.order.alpha();
    let phi = u.map(|t, v| (problem.phi)(t, v)).map_err(|e| match e {
        Error::NonFinite { index, .. } => Error::NonFinite {
            context: "nonlinearity φ(t, u)",
            index,
        },
        other => other,
    })?;
    let dphi = derivative(&phi)?;
    let w = phi.zip_with(&dphi, |p, dp| (1.0 - alpha) * dp + alpha * p)?;
    let j0 = cumulative_integral(&w);
    let j1 = cumulative_integral(&w.map(|t, v| t * v)?);
    let values = problem
        .grid
        .nodes()
        .zip(j0.values().iter().zip(j1.values()))
        .map(|(t, (a, b))| problem.u0 + problem.u1 * t + t * a - b)
        .collect();
    GridFunction::new(problem.grid, values)
}

/// Iterates `u_{k+1} = N u_k` from `U0 + U1 t` until successive iterates
/// differ by at most `tol` in the sup-norm.
pub fn picard_solve<F: Fn(f64, f64) -> f64>(
    problem: &NonlinearProblem<F>,
    tol: f64,
    max_iter: usize,
) -> Result<(GridFunction, PicardState)> {
    picard_solve_from(problem, problem.initial_iterate(), tol, max_iter)
}

/// [`picard_solve`] from an arbitrary starting iterate.
pub fn picard_solve_from<F: Fn(f64, f64) -> f64>(
    problem: &NonlinearProblem<F>,
    start: GridFunction,
    tol: f64,
    max_iter: usize,
) -> Result<(GridFunction, PicardState)> {
    let q = contraction_check(problem);
    if !(q < 1.0) {
        return Err(Error::NotContractive { q });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be positive, got {tol}"),
        });
    }
    let mut current = start;
    let mut diffs = Vec::new();
    for iteration in 1..=max_iter {
        let next = apply_n(problem, &current)?;
        let diff = next.max_distance(&current)?;
        diffs.push(diff);
        current = next;
        if diff <= tol {
            let state = PicardState {
                iterate: current.clone(),
                iteration_count: iteration,
                successive_diffs: diffs,
                contraction_factor: q,
            };
            return Ok((current, state));
        }
    }
    Err(Error::MaxIterationsExceeded {
        iterations: max_iter,
        last_diff: diffs.last().copied().unwrap_or(f64::INFINITY),
    })
}
