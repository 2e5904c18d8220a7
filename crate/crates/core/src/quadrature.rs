//! Composite trapezoidal integration and finite-difference derivatives on
//! uniform grids. Every stencil is second-order accurate, endpoints included.

use crate::error::Result;
use crate::grid::GridFunction;

/// Running trapezoidal antiderivative `F(t_k) = ∫_{t0}^{t_k} f`, with `F(t0) = 0`.
pub fn cumulative_integral(f: &GridFunction) -> GridFunction {
    let h = f.grid().step();
    let v = f.values();
    let mut out = Vec::with_capacity(v.len());
    let mut acc = 0.0;
    out.push(acc);
    for w in v.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    GridFunction::new(*f.grid(), out).expect("sum of finite samples is finite")
}

/// Trapezoidal approximation of `∫_{t0}^{t1} f`.
pub fn integral(f: &GridFunction) -> f64 {
    let v = f.values();
    let inner: f64 = v[1..v.len() - 1].iter().sum();
    f.grid().step() * (0.5 * (v[0] + v[v.len() - 1]) + inner)
}

/// First derivative: central differences inside, one-sided three-point
/// stencils at both ends.
pub fn derivative(f: &GridFunction) -> Result<GridFunction> {
    let grid = *f.grid();
    grid.require(3)?;
    let h = grid.step();
    let v = f.values();
    let n = v.len();
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    for k in 1..n - 1 {
        out[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    GridFunction::new(grid, out)
}

/// Second derivative: three-point stencil inside, four-point one-sided
/// stencils at both ends.
pub fn second_derivative(f: &GridFunction) -> Result<GridFunction> {
    let grid = *f.grid();
    grid.require(4)?;
    let h2 = grid.step() * grid.step();
    let v = f.values();
    let n = v.len();
    let mut out = vec![0.0; n];
    out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    for k in 1..n - 1 {
        out[k] = (v[k - 1] - 2.0 * v[k] + v[k + 1]) / h2;
    }
    out[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
    GridFunction::new(grid, out)
}
