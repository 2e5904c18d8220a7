//! Caputo-Fabrizio derivatives evaluated on sampled functions.
//!
//! All three operators convolve a finite-difference derivative of the input
//! with the exponential kernel `exp(-κ(t-s))`, `κ = γ/(1-γ)`, using the
//! composite trapezoidal rule on the sampled product. On a uniform grid the
//! kernel factorises across steps, so each operator is a linear-time
//! recurrence that reproduces the full trapezoidal sum at every node.

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::quadrature::{derivative, second_derivative};

/// Order `β = 1 + α` of the Caputo-Fabrizio derivative, `0 < α ≤ 1`.
///
/// `α = 1` is a valid order, but every kernel-based operation rejects it
/// because the kernel rate `α/(1-α)` is unbounded there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfOrder {
    alpha: f64,
}

impl CfOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self { alpha })
        } else {
            Err(Error::OrderOutOfRange {
                value: alpha,
                range: "(0, 1]",
            })
        }
    }

    /// Builds the order from `β ∈ (1, 2]`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        Self::new(beta - 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        1.0 + self.alpha
    }

    /// Kernel decay rate `α/(1-α)`; fails for `α = 1`.
    pub fn kernel_rate(&self) -> Result<f64> {
        kernel_rate(self.alpha)
    }
}

/// `γ/(1-γ)` for `γ ∈ (0, 1)`.
pub(crate) fn kernel_rate(gamma: f64) -> Result<f64> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(gamma / (1.0 - gamma))
    } else {
        Err(Error::OrderOutOfRange {
            value: gamma,
            range: "(0, 1) for kernel-based operators",
        })
    }
}

/// Trapezoidal sums of `∫_{t0}^{t_k} d(s) e^{-κ(t_k-s)} ds` and, when
/// `with_moment`, of `∫ d(s) (t_k-s) e^{-κ(t_k-s)} ds`.
pub(crate) fn exp_convolution(d: &[f64], h: f64, kappa: f64, with_moment: bool) -> (Vec<f64>, Vec<f64>) {
    let n = d.len();
    let decay = (-kappa * h).exp();
    let mut i0 = vec![0.0; n];
    let mut i1 = if with_moment { vec![0.0; n] } else { Vec::new() };
    // p: Σ c_j d_j E^{k-j} with c_0 = 1/2; q: Σ c_j d_j (k-j) E^{k-j}.
    let mut p = 0.5 * d[0];
    let mut q = 0.0;
    for k in 1..n {
        if with_moment {
            q = decay * (q + p);
            i1[k] = h * h * q;
        }
        p = decay * p + d[k];
        i0[k] = h * (p - 0.5 * d[k]);
    }
    (i0, i1)
}

/// First-order Caputo-Fabrizio derivative
/// `(1/(1-γ)) ∫_{t0}^t x'(s) e^{-γ(t-s)/(1-γ)} ds` for `0 < γ < 1`.
pub fn cf_d_gamma(x: &GridFunction, gamma: f64) -> Result<GridFunction> {
    let kappa = kernel_rate(gamma)?;
    let dx = derivative(x)?;
    let (i0, _) = exp_convolution(dx.values(), x.grid().step(), kappa, false);
    let scale = 1.0 / (1.0 - gamma);
    GridFunction::new(*x.grid(), i0.into_iter().map(|v| scale * v).collect())
}

/// Caputo-Fabrizio derivative of order `β = 1 + α` with lower limit `a`,
/// `(1/(1-α)) ∫_a^t u''(s) e^{-α(t-s)/(1-α)} ds`.
///
/// `a` must coincide with the grid start.
pub fn cf_d_beta(u: &GridFunction, order: CfOrder, a: f64) -> Result<GridFunction> {
    let t0 = u.grid().t0();
    if (a - t0).abs() > 1e-12 * t0.abs().max(1.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            reason: format!("lower limit {a} must equal the grid start {t0}"),
        });
    }
    let kappa = order.kernel_rate()?;
    let d2u = second_derivative(u)?;
    let (i0, _) = exp_convolution(d2u.values(), u.grid().step(), kappa, false);
    let scale = 1.0 / (1.0 - order.alpha());
    GridFunction::new(*u.grid(), i0.into_iter().map(|v| scale * v).collect())
}

/// Composed order-`2γ` derivative
/// `(1/(1-γ)²) ∫_{t0}^t x'(s) [1 - κ(t-s)] e^{-κ(t-s)} ds`, which equals
/// [`cf_d_gamma`] applied twice.
pub fn cf_d_2gamma(x: &GridFunction, gamma: f64) -> Result<GridFunction> {
    let kappa = kernel_rate(gamma)?;
    let dx = derivative(x)?;
    let (i0, i1) = exp_convolution(dx.values(), x.grid().step(), kappa, true);
    let scale = 1.0 / ((1.0 - gamma) * (1.0 - gamma));
    let values = i0.iter().zip(&i1).map(|(a, b)| scale * (a - kappa * b)).collect();
    GridFunction::new(*x.grid(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use proptest::prelude::*;

    fn sample(t0: f64, t1: f64, n: usize, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction::from_fn(Grid::new(t0, t1, n).unwrap(), f).unwrap()
    }

    fn value_at(f: &GridFunction, t: f64) -> f64 {
        let g = f.grid();
        let k = ((t - g.t0()) / g.step()).round() as usize;
        assert!((g.node(k) - t).abs() < 1e-12);
        f.values()[k]
    }

    // Brute-force composite Simpson for the kernel integrals, independent of
    // the recurrence used by the operators.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, m: usize) -> f64 {
        let h = (b - a) / m as f64;
        let mut s = f(a) + f(b);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn order_bookkeeping() {
        let o = CfOrder::new(0.25).unwrap();
        assert_eq!(o.beta(), 1.25);
        assert_eq!(o.kernel_rate().unwrap(), 0.25 / 0.75);
        assert_eq!(CfOrder::from_beta(1.5).unwrap().alpha(), 0.5);
        assert!(CfOrder::new(0.0).is_err());
        assert!(CfOrder::new(1.2).is_err());
        let one = CfOrder::new(1.0).unwrap();
        assert!(matches!(one.kernel_rate(), Err(Error::OrderOutOfRange { .. })));
    }

    #[test]
    fn exp_convolution_matches_direct_sum() {
        let d: Vec<f64> = (0..9).map(|k| (k as f64 * 0.3).sin() + 1.0).collect();
        let (h, kappa) = (0.1, 1.7);
        let (i0, i1) = exp_convolution(&d, h, kappa, true);
        for k in 1..d.len() {
            let mut s0 = 0.0;
            let mut s1 = 0.0;
            for (j, dj) in d.iter().enumerate().take(k + 1) {
                let w = if j == 0 || j == k { 0.5 } else { 1.0 };
                let tau = (k - j) as f64 * h;
                s0 += w * h * dj * (-kappa * tau).exp();
                s1 += w * h * dj * tau * (-kappa * tau).exp();
            }
            assert!((i0[k] - s0).abs() < 1e-14, "{k}");
            assert!((i1[k] - s1).abs() < 1e-14, "{k}");
        }
    }

    #[test]
    fn gamma_derivative_of_constant_vanishes() {
        let x = sample(0.0, 1.0, 21, |_| 3.0);
        assert!(cf_d_gamma(&x, 0.4).unwrap().max_norm() < 1e-12);
        assert!(cf_d_2gamma(&x, 0.4).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn gamma_derivative_of_identity() {
        // (1/γ)(1 - e^{-γt/(1-γ)}) at γ = 1/2, t = 1.
        let x = sample(0.0, 2.0, 4001, |t| t);
        let d = cf_d_gamma(&x, 0.5).unwrap();
        let expected = 2.0 * (1.0 - (-1.0_f64).exp());
        assert!((expected - 1.264241).abs() < 1e-6);
        assert!((value_at(&d, 1.0) - expected).abs() < 1e-6);
    }

    #[test]
    fn gamma_derivative_of_exp() {
        let gamma = 0.5;
        let kappa = gamma / (1.0 - gamma);
        let x = sample(0.0, 2.0, 4001, f64::exp);
        let d = cf_d_gamma(&x, gamma).unwrap();
        // (1/(1-γ)) ∫_0^t e^s e^{-κ(t-s)} ds in closed form.
        let closed = |t: f64| (t.exp() - (-kappa * t).exp()) / ((1.0 - gamma) * (1.0 + kappa));
        let quad = simpson(|s| s.exp() * (-kappa * (1.0 - s)).exp(), 0.0, 1.0, 2000) / (1.0 - gamma);
        assert!((closed(1.0) - quad).abs() < 1e-10);
        assert!((value_at(&d, 1.0) - closed(1.0)).abs() < 1e-6);
    }

    #[test]
    fn beta_derivative_of_affine_vanishes() {
        let u = sample(0.0, 2.0, 101, |t| 1.5 - 0.25 * t);
        let d = cf_d_beta(&u, CfOrder::new(0.3).unwrap(), 0.0).unwrap();
        assert!(d.max_norm() < 1e-10);
    }

    #[test]
    fn beta_derivative_of_square() {
        let u = sample(0.0, 2.0, 4001, |t| t * t);
        let d = cf_d_beta(&u, CfOrder::new(0.5).unwrap(), 0.0).unwrap();
        let expected = 4.0 * (1.0 - (-1.0_f64).exp());
        assert!((expected - 2.528482).abs() < 1e-6);
        assert!((value_at(&d, 1.0) - expected).abs() < 1e-6);
    }

    #[test]
    fn beta_derivative_of_exp() {
        let u = sample(0.0, 2.0, 4001, f64::exp);
        let d = cf_d_beta(&u, CfOrder::new(0.5).unwrap(), 0.0).unwrap();
        let expected = 1.0_f64.exp() - (-1.0_f64).exp();
        assert!((expected - 2.350403).abs() < 1e-6);
        assert!((value_at(&d, 1.0) - expected).abs() < 1e-6);
    }

    #[test]
    fn beta_derivative_requires_grid_start() {
        let u = sample(1.0, 2.0, 11, |t| t);
        let err = cf_d_beta(&u, CfOrder::new(0.5).unwrap(), 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { name: "a", .. }));
        assert!(cf_d_beta(&u, CfOrder::new(0.5).unwrap(), 1.0).is_ok());
        assert!(cf_d_beta(&u, CfOrder::new(1.0).unwrap(), 1.0).is_err());
    }

    #[test]
    fn two_gamma_derivative_of_identity() {
        // (1/(1-γ)²) ∫_0^t [1 - κτ] e^{-κτ} dτ = t e^{-κt}/(1-γ)².
        let gamma = 0.5;
        let kappa = 1.0;
        let quad = simpson(|tau| (1.0 - kappa * tau) * (-kappa * tau).exp(), 0.0, 1.0, 2000) / 0.25;
        let closed = 4.0 * (-1.0_f64).exp();
        assert!((quad - closed).abs() < 1e-10);
        let x = sample(0.0, 2.0, 4001, |t| t);
        let d = cf_d_2gamma(&x, gamma).unwrap();
        assert!((value_at(&d, 1.0) - closed).abs() < 1e-6);
    }

    #[test]
    fn two_gamma_equals_composition() {
        for n in [201, 401] {
            let x = sample(0.0, 1.0, n, |t| (2.0 * t).sin() + t * t);
            let h = x.grid().step();
            let composed = cf_d_gamma(&cf_d_gamma(&x, 0.4).unwrap(), 0.4).unwrap();
            let direct = cf_d_2gamma(&x, 0.4).unwrap();
            let dist = composed.max_distance(&direct).unwrap();
            assert!(dist <= 10.0 * h * h, "n={n}: {dist}");
        }
    }

    #[test]
    fn classical_limit() {
        let eps = 1e-3;
        let x = sample(0.0, 1.0, 20001, |t| t.sin());
        let d = cf_d_gamma(&x, 1.0 - eps).unwrap();
        // Away from the initial layer of width ~ε the operator tracks x'.
        let g = x.grid();
        let worst = g
            .nodes()
            .zip(d.values())
            .filter(|(t, _)| *t > 0.05)
            .fold(0.0_f64, |m, (t, v)| m.max((v - t.cos()).abs()));
        assert!(worst < 5.0 * eps, "{worst}");
    }

    #[test]
    fn rejects_orders_outside_unit_interval() {
        let x = sample(0.0, 1.0, 11, |t| t);
        for gamma in [0.0, 1.0, -0.5, 1.5] {
            assert!(cf_d_gamma(&x, gamma).is_err());
            assert!(cf_d_2gamma(&x, gamma).is_err());
        }
    }

    proptest! {
        #[test]
        fn operators_are_linear(
            a in -5.0..5.0f64,
            b in -5.0..5.0f64,
            p in 0.5..3.0f64,
            gamma in 0.05..0.95f64,
        ) {
            let f = sample(0.0, 1.0, 64, |t| (p * t).sin());
            let g = sample(0.0, 1.0, 64, |t| (t * p).exp() - t * t);
            let combo = f.zip_with(&g, |x, y| a * x + b * y).unwrap();
            let order = CfOrder::new(gamma).unwrap();
            type Op = Box<dyn Fn(&GridFunction) -> GridFunction>;
            let ops: [Op; 3] = [
                Box::new(move |x| cf_d_gamma(x, gamma).unwrap()),
                Box::new(move |x| cf_d_2gamma(x, gamma).unwrap()),
                Box::new(move |x| cf_d_beta(x, order, 0.0).unwrap()),
            ];
            for op in &ops {
                let lhs = op(&combo);
                let rhs = op(&f).zip_with(&op(&g), |x, y| a * x + b * y).unwrap();
                prop_assert!(lhs.max_distance(&rhs).unwrap() <= 1e-9 * (1.0 + rhs.max_norm()));
            }
        }
    }
}
