//! Problem fixtures shared by the benchmarks in `benches/`.

use cfode_core::{CfOrder, Grid, GridFunction, LinearProblem, MsdParams};

pub fn grid(t1: f64, n: usize) -> Grid {
    Grid::new(0.0, t1, n).expect("valid grid")
}

/// `D^β u - λu = t e^{-t}` on `[0, 2]` with zero initial data.
pub fn linear_problem(alpha: f64, lambda: f64, n: usize) -> LinearProblem {
    let g = grid(2.0, n);
    let f = GridFunction::from_fn(g, |t| t * (-t).exp()).unwrap();
    let fp = GridFunction::from_fn(g, |t| (1.0 - t) * (-t).exp()).unwrap();
    LinearProblem::new(CfOrder::new(alpha).unwrap(), lambda, f, fp, 0.0, 0.0).unwrap()
}

/// Damped oscillator driven by `sin t` on `[0, 5]`.
pub fn msd_case(gamma: f64, n: usize) -> (MsdParams, GridFunction) {
    let params = MsdParams::new(1.0, 0.5, 4.0, 1.0, gamma).unwrap();
    let force = GridFunction::from_fn(grid(5.0, n), f64::sin).unwrap();
    (params, force)
}
