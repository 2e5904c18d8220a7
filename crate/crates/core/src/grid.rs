//! Uniform time grids and functions sampled on them.

use crate::error::{Error, Result};

/// Uniform grid of `n` nodes on `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    t0: f64,
    t1: f64,
    n: usize,
    h: f64,
}

impl Grid {
    pub fn new(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid(format!("t1 ({t1}) must exceed t0 ({t0})")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 nodes, got {n}")));
        }
        let h = (t1 - t0) / (n - 1) as f64;
        if !(h > 0.0) {
            return Err(Error::InvalidGrid("step underflows to zero".into()));
        }
        Ok(Self { t0, t1, n, h })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// Node `k`, exactly `t0 + k*h`.
    pub fn node(&self, k: usize) -> f64 {
        self.t0 + k as f64 * self.h
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.node(k))
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.n < required {
            Err(Error::GridTooSmall { n: self.n, required })
        } else {
            Ok(())
        }
    }
}

/// Real-valued function sampled at every node of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid function",
                index,
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Largest absolute sample.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Pointwise map, keeping the grid.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = self.grid.nodes().zip(&self.values).map(|(t, &v)| f(t, v)).collect();
        Self::new(self.grid, values)
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.grid, values)
    }

    /// Max-norm of `self - other`.
    pub fn max_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Piecewise-linear resampling of scattered samples `(t, y)` onto `grid`.
    ///
    /// `ts` must be strictly increasing and cover `[grid.t0, grid.t1]`.
    pub fn interpolate(grid: Grid, ts: &[f64], ys: &[f64]) -> Result<Self> {
        if ts.len() != ys.len() {
            return Err(Error::LengthMismatch {
                expected: ts.len(),
                actual: ys.len(),
            });
        }
        if ts.len() < 2 {
            return Err(Error::InvalidGrid("need at least two samples".into()));
        }
        if ts.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidGrid("sample times must increase strictly".into()));
        }
        let span = (grid.t1() - grid.t0()).abs();
        let slack = 1e-9 * span.max(1.0);
        if ts[0] > grid.t0() + slack || ts[ts.len() - 1] < grid.t1() - slack {
            return Err(Error::InvalidGrid(format!(
                "samples cover [{}, {}], grid needs [{}, {}]",
                ts[0],
                ts[ts.len() - 1],
                grid.t0(),
                grid.t1()
            )));
        }
        let mut j = 0;
        let values = grid
            .nodes()
            .map(|t| {
                while j + 2 < ts.len() && ts[j + 1] < t {
                    j += 1;
                }
                let w = ((t - ts[j]) / (ts[j + 1] - ts[j])).clamp(0.0, 1.0);
                ys[j] + w * (ys[j + 1] - ys[j])
            })
            .collect();
        Self::new(grid, values)
    }
}
