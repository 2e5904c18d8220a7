//! Second-kind Volterra equations with convolution kernels
//! `K(τ) = (A + Bτ) e^{-ρτ}`:
//!
//! ```text
//! y(t) + ∫_{t0}^t K(t - s) y(s) ds = F(t)
//! ```
//!
//! Solved by a direct time march with product integration: `y` is replaced by
//! its piecewise-linear interpolant and the kernel is integrated exactly on
//! each cell. For a constant kernel the weights are exactly the trapezoidal
//! ones; in general the march is second-order accurate and stays accurate
//! when `ρh` is not small.

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};

/// `y + ∫ (a + b(t-s)) e^{-decay (t-s)} y(s) ds = rhs`.
#[derive(Debug, Clone)]
pub struct VolterraProblem {
    pub a: f64,
    pub b: f64,
    /// Exponential decay rate of the kernel; zero gives the polynomial kernel
    /// `a + b(t-s)`.
    pub decay: f64,
    pub rhs: GridFunction,
}

impl VolterraProblem {
    /// Polynomial kernel `a + b(t - s)`.
    pub fn new(a: f64, b: f64, rhs: GridFunction) -> Self {
        Self::with_decay(a, b, 0.0, rhs)
    }

    pub fn with_decay(a: f64, b: f64, decay: f64, rhs: GridFunction) -> Self {
        Self { a, b, decay, rhs }
    }

    pub fn kernel(&self, tau: f64) -> f64 {
        (self.a + self.b * tau) * (-self.decay * tau).exp()
    }
}

/// `∫_0^1 u^m e^{-xu} du` for `m = 0, 1, 2`.
fn exp_moments(x: f64) -> [f64; 3] {
    if x.abs() < 1.0 {
        // Σ_k (-x)^k / (k! (m + k + 1)); 25 terms reach round-off for |x| < 1.
        let mut out = [0.0; 3];
        let mut term = 1.0;
        for k in 0..25 {
            for (m, o) in out.iter_mut().enumerate() {
                *o += term / (m + k + 1) as f64;
            }
            term *= -x / (k + 1) as f64;
        }
        out
    } else {
        let e = (-x).exp();
        [
            (1.0 - e) / x,
            (1.0 - (1.0 + x) * e) / (x * x),
            (2.0 - (x * x + 2.0 * x + 2.0) * e) / (x * x * x),
        ]
    }
}

/// Cell weights for the cell spanning lags `[p h, (p+1) h]`:
/// `far[p] = ∫_0^h K(ph+σ) σ/h dσ` multiplies the node at lag `p+1`,
/// `near[p] = ∫_0^h K(ph+σ) (h-σ)/h dσ` the node at lag `p`.
fn cell_weights(problem: &VolterraProblem, h: f64, cells: usize) -> (Vec<f64>, Vec<f64>) {
    let [m0, m1, m2] = exp_moments(problem.decay * h);
    let (m0, m1, m2) = (h * m0, h * h * m1, h * h * h * m2);
    let mut far = Vec::with_capacity(cells);
    let mut near = Vec::with_capacity(cells);
    for p in 0..cells {
        let lag = p as f64 * h;
        let scale = (-problem.decay * lag).exp() / h;
        let base = problem.a + problem.b * lag;
        far.push(scale * (base * m1 + problem.b * m2));
        near.push(scale * (base * (h * m0 - m1) + problem.b * (h * m1 - m2)));
    }
    (far, near)
}

/// Marches the Volterra equation across `grid`, which must be the grid of
/// `problem.rhs`.
pub fn volterra_solve(problem: &VolterraProblem, grid: &Grid) -> Result<GridFunction> {
    if problem.rhs.grid() != grid {
        return Err(Error::GridMismatch);
    }
    for (name, v) in [("A", problem.a), ("B", problem.b), ("decay", problem.decay)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be finite".into(),
            });
        }
    }
    let n = grid.len();
    let h = grid.step();
    let (far, near) = cell_weights(problem, h, n - 1);
    let pivot = 1.0 + near[0];
    if pivot.abs() < 1e-12 {
        return Err(Error::NearSingularStep { pivot });
    }
    // Combined weight of an interior node at lag m: right end of one cell,
    // left end of the next.
    let lag_weight: Vec<f64> = (0..n)
        .map(|m| {
            if m == 0 {
                near[0]
            } else if m < n - 1 {
                near[m] + far[m - 1]
            } else {
                0.0
            }
        })
        .collect();

    let rhs = problem.rhs.values();
    let mut y = vec![0.0; n];
    y[0] = rhs[0];
    for k in 1..n {
        let mut acc = far[k - 1] * y[0];
        for j in 1..k {
            acc += lag_weight[k - j] * y[j];
        }
        y[k] = (rhs[k] - acc) / pivot;
    }
    GridFunction::new(*grid, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_const(a: f64, b: f64, n: usize, t1: f64, f: impl Fn(f64) -> f64) -> GridFunction {
        let grid = Grid::new(0.0, t1, n).unwrap();
        let p = VolterraProblem::new(a, b, GridFunction::from_fn(grid, f).unwrap());
        volterra_solve(&p, &grid).unwrap()
    }

    #[test]
    fn moments_agree_across_the_switch() {
        for x in [0.999_999, 1.000_001, -0.999_999, -1.000_001] {
            let m = exp_moments(x);
            // Midpoint-refined Simpson as an independent oracle.
            let q = |k: i32| {
                let n = 2000;
                let h = 1.0 / n as f64;
                let f = |u: f64| u.powi(k) * (-x * u).exp();
                let mut s = f(0.0) + f(1.0);
                for i in 1..n {
                    s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
                }
                s * h / 3.0
            };
            for (k, mk) in m.iter().enumerate() {
                assert!((mk - q(k as i32)).abs() < 1e-12, "x={x} m{k}");
            }
        }
    }

    #[test]
    fn constant_kernel_weights_are_trapezoidal() {
        let grid = Grid::new(0.0, 1.0, 6).unwrap();
        let p = VolterraProblem::new(2.0, 0.0, GridFunction::zeros(grid));
        let (far, near) = cell_weights(&p, 0.2, 5);
        for (a, b) in far.iter().zip(&near) {
            assert!((a - 0.2).abs() < 1e-15 && (b - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_forcing_gives_zero() {
        assert_eq!(solve_const(1.3, -0.4, 50, 2.0, |_| 0.0).max_norm(), 0.0);
    }

    #[test]
    fn vanishing_kernel_returns_forcing() {
        let y = solve_const(0.0, 0.0, 31, 1.0, |t| t.sin() + 2.0);
        for (t, v) in y.grid().nodes().zip(y.values()) {
            assert_eq!(*v, t.sin() + 2.0);
        }
    }

    #[test]
    fn exponential_decay_oracle() {
        // y + ∫ y = 1  ⇒  y' = -y, y(0) = 1.
        let errs: Vec<f64> = [1001, 2001, 4001]
            .iter()
            .map(|&n| (solve_const(1.0, 0.0, n, 1.0, |_| 1.0).last() - (-1.0_f64).exp()).abs())
            .collect();
        assert!(errs[2] < 1e-5, "{errs:?}");
        assert!(errs[0] / errs[1] >= 3.5 && errs[1] / errs[2] >= 3.5, "{errs:?}");
    }

    #[test]
    fn linear_kernel_oracle() {
        // y + ∫ (t-s) y = 1  ⇒  y'' = -y, y(0) = 1, y'(0) = 0  ⇒  y = cos t.
        let y = solve_const(0.0, 1.0, 2001, 3.0, |_| 1.0);
        let err = y
            .grid()
            .nodes()
            .zip(y.values())
            .fold(0.0_f64, |m, (t, v)| m.max((v - t.cos()).abs()));
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn decaying_kernel_oracle() {
        // K = 2 e^{-3τ}, F = 1: Laplace gives Y = (s+3)/(s(s+5)),
        // y = 3/5 + (2/5) e^{-5t}.
        let grid = Grid::new(0.0, 2.0, 801).unwrap();
        let p = VolterraProblem::with_decay(2.0, 0.0, 3.0, GridFunction::from_fn(grid, |_| 1.0).unwrap());
        let y = volterra_solve(&p, &grid).unwrap();
        let err = grid
            .nodes()
            .zip(y.values())
            .fold(0.0_f64, |m, (t, v)| m.max((v - (0.6 + 0.4 * (-5.0 * t).exp())).abs()));
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn stiff_kernel_preserves_steady_state() {
        // Constant solutions are reproduced exactly whatever ρh is.
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        // Roots of (s+ρ)² + a(s+ρ) + b sit in the left half-plane.
        let (a, b, rho) = (100.0, 2000.0, 80.0);
        let p0 = VolterraProblem::with_decay(a, b, rho, GridFunction::zeros(grid));
        let rhs = GridFunction::from_fn(grid, |t| {
            // 1 + ∫_0^t K
            let [m0, m1, _] = exp_moments(rho * t);
            1.0 + a * t * m0 + b * t * t * m1
        })
        .unwrap();
        let p = VolterraProblem { rhs, ..p0 };
        let y = volterra_solve(&p, &grid).unwrap();
        let worst = y.values().iter().fold(0.0_f64, |m, v| m.max((v - 1.0).abs()));
        assert!(worst < 1e-9, "{worst}");
    }

    #[test]
    fn rejects_singular_step_and_foreign_grid() {
        let grid = Grid::new(0.0, 1.0, 11).unwrap();
        let p = VolterraProblem::new(-20.0, 0.0, GridFunction::zeros(grid));
        assert!(matches!(volterra_solve(&p, &grid), Err(Error::NearSingularStep { .. })));
        let other = Grid::new(0.0, 1.0, 12).unwrap();
        assert_eq!(volterra_solve(&p, &other).unwrap_err(), Error::GridMismatch);
    }
}
