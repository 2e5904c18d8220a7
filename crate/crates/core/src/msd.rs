//! Fractional mass-spring-damper motion
//!
//! ```text
//! m/σ^{2(1-γ)} D^{2γ} x + δ/σ^{1-γ} D^γ x + k x = F(t),   0 < γ < 1,
//! ```
//!
//! where `σ` (seconds) keeps the fractional operators dimensionally
//! consistent. With `M = m/σ^{2ν}`, `Δ = δ/σ^ν`, `ν = 1-γ`, `κ = γ/ν`, one
//! integration by parts and the substitution `y = x e^{κt}` give the
//! second-kind Volterra equation
//!
//! ```text
//! y(t) + ∫_0^t y(s) [A + B(t-s)] ds = F1(t)
//! A  = -κ (2M/ν + Δ) / D0
//! B  =  κ² M / (ν D0)
//! F1 = [ν F(t) e^{κt} + x(0) (M/ν + Δ - (Mκ/ν) t)] / D0
//! D0 = M/ν + Δ + kν
//! ```
//!
//! which is uniquely solvable when `D0 ≠ 0`. Both fractional derivatives
//! vanish at `t = 0`, so the equation itself forces `x(0) = F(0)/k`; see
//! [`consistent_start`].

use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::operator::{cf_d_2gamma, cf_d_gamma};
use crate::volterra::{volterra_solve, VolterraProblem};

/// Physical parameters: mass `m`, damping `delta`, stiffness `k`, time scale
/// `sigma` and fractional order `gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MsdParams {
    pub m: f64,
    pub delta: f64,
    pub k: f64,
    pub sigma: f64,
    pub gamma: f64,
}

/// Derived constants shared by the reduction and the solver.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mass: f64,
    damping: f64,
    nu: f64,
    kappa: f64,
    denominator: f64,
}

impl MsdParams {
    pub fn new(m: f64, delta: f64, k: f64, sigma: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            m,
            delta,
            k,
            sigma,
            gamma,
        };
        p.scaled()?;
        Ok(p)
    }

    fn scaled(&self) -> Result<Scaled> {
        let positive = [("m", self.m), ("k", self.k), ("sigma", self.sigma)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: "must be finite".into(),
            });
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::OrderOutOfRange {
                value: self.gamma,
                range: "(0, 1)",
            });
        }
        let nu = 1.0 - self.gamma;
        let mass = self.m / self.sigma.powf(2.0 * nu);
        let damping = self.delta / self.sigma.powf(nu);
        let terms = [mass / nu, damping, self.k * nu];
        let denominator: f64 = terms.iter().sum();
        let size: f64 = terms.iter().map(|v| v.abs()).sum();
        if !(denominator.abs() > 1e-12 * size) || !denominator.is_finite() {
            return Err(Error::SolvabilityViolation { denominator });
        }
        Ok(Scaled {
            mass,
            damping,
            nu,
            kappa: self.gamma / nu,
            denominator,
        })
    }

    /// `m/(σ^{2(1-γ)}(1-γ)) + δ/σ^{1-γ} + k(1-γ)`, nonzero for a solvable
    /// problem.
    pub fn solvability_denominator(&self) -> Result<f64> {
        Ok(self.scaled()?.denominator)
    }

    /// Kernel coefficients `(A, B)` of the Volterra form.
    pub fn kernel_coefficients(&self) -> Result<(f64, f64)> {
        let s = self.scaled()?;
        Ok(kernel(&s))
    }
}

fn kernel(s: &Scaled) -> (f64, f64) {
    let a = -s.kappa * (2.0 * s.mass / s.nu + s.damping) / s.denominator;
    let b = s.kappa * s.kappa * s.mass / (s.nu * s.denominator);
    (a, b)
}

/// The only start value compatible with the equation at `t = 0`.
pub fn consistent_start(params: &MsdParams, forcing: &GridFunction) -> f64 {
    forcing.first() / params.k
}

/// `F1(t) e^{-κt}`, computed without forming `e^{κt}`.
fn scaled_forcing(s: &Scaled, forcing: &GridFunction, x0: f64) -> Result<GridFunction> {
    let t0 = forcing.grid().t0();
    forcing.map(|t, f| {
        let tau = t - t0;
        let boundary = s.mass / s.nu + s.damping - s.mass * s.kappa / s.nu * tau;
        (s.nu * f + x0 * boundary * (-s.kappa * tau).exp()) / s.denominator
    })
}

/// Volterra problem `y + ∫ y [A + B(t-s)] ds = F1` for `y = x e^{κ(t-t0)}`.
///
/// `F1` grows like `e^{κt}`; horizons with `κ (t1 - t0)` beyond ~700
/// overflow and are reported as [`Error::NonFinite`]. [`solve_msd`] does not
/// go through this form.
pub fn msd_reduce(params: &MsdParams, forcing: &GridFunction, x0: f64) -> Result<VolterraProblem> {
    let s = params.scaled()?;
    let (a, b) = kernel(&s);
    let t0 = forcing.grid().t0();
    let g = scaled_forcing(&s, forcing, x0)?;
    let values = g
        .grid()
        .nodes()
        .zip(g.values())
        .map(|(t, v)| v * (s.kappa * (t - t0)).exp())
        .collect();
    let f1 = GridFunction::new(*forcing.grid(), values).map_err(|e| match e {
        Error::NonFinite { index, .. } => Error::NonFinite {
            context: "Volterra forcing F1",
            index,
        },
        other => other,
    })?;
    Ok(VolterraProblem::new(a, b, f1))
}

/// Displacement `x(t)` on the forcing grid, starting from `x(t0) = x0`.
///
/// The Volterra equation is marched directly in `x`, i.e. with kernel
/// `(A + Bτ) e^{-κτ}` and forcing `F1 e^{-κt}`, so long horizons and orders
/// close to one stay well scaled.
pub fn solve_msd(params: &MsdParams, forcing: &GridFunction, x0: f64) -> Result<GridFunction> {
    if !x0.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x0",
            reason: "must be finite".into(),
        });
    }
    let s = params.scaled()?;
    let (a, b) = kernel(&s);
    let rhs = scaled_forcing(&s, forcing, x0)?;
    let problem = VolterraProblem::with_decay(a, b, s.kappa, rhs);
    volterra_solve(&problem, forcing.grid())
}

/// Pointwise residual of the fractional equation for a candidate `x`.
pub fn msd_residual(params: &MsdParams, x: &GridFunction, forcing: &GridFunction) -> Result<GridFunction> {
    let s = params.scaled()?;
    let d2 = cf_d_2gamma(x, params.gamma)?;
    let d1 = cf_d_gamma(x, params.gamma)?;
    let lhs = d2.zip_with(&d1, |a, b| s.mass * a + s.damping * b)?;
    let lhs = lhs.zip_with(x, |l, v| l + params.k * v)?;
    lhs.zip_with(forcing, |l, f| l - f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;

    fn params(m: f64, delta: f64, k: f64, sigma: f64, gamma: f64) -> MsdParams {
        MsdParams::new(m, delta, k, sigma, gamma).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn coefficients_for_unit_mass_spring() {
        // M = 1, Δ = 0, ν = 1/2, κ = 1, D0 = 2 + 1/2.
        let p = params(1.0, 0.0, 1.0, 1.0, 0.5);
        assert!((p.solvability_denominator().unwrap() - 2.5).abs() < 1e-15);
        let (a, b) = p.kernel_coefficients().unwrap();
        assert!((a + 1.6).abs() < 1e-14, "{a}");
        assert!((b - 0.8).abs() < 1e-14, "{b}");
    }

    #[test]
    fn volterra_form_oracle() {
        // Independent check of A, B, F1: pick x(t), build F from the
        // fractional equation by quadrature, then check the Volterra identity
        // y + ∫ y [A + B(t-s)] = F1 by quadrature.
        let p = params(1.0, 0.5, 4.0, 1.3, 0.6);
        let (nu, kappa) = (0.4, 1.5);
        let mass = 1.0 / 1.3_f64.powf(0.8);
        let damping = 0.5 / 1.3_f64.powf(0.4);
        let x = |t: f64| 0.25 + t * t - 0.3 * t * t * t;
        let dx = |t: f64| 2.0 * t - 0.9 * t * t;
        let forcing = |t: f64| {
            let d1 = simpson(|s| dx(s) * (-kappa * (t - s)).exp(), 0.0, t, 400) / nu;
            let d2 = simpson(
                |s| dx(s) * (1.0 - kappa * (t - s)) * (-kappa * (t - s)).exp(),
                0.0,
                t,
                400,
            ) / (nu * nu);
            mass * d2 + damping * d1 + 4.0 * x(t)
        };
        let grid = Grid::new(0.0, 1.2, 7).unwrap();
        let big_f = GridFunction::from_fn(grid, forcing).unwrap();
        let vp = msd_reduce(&p, &big_f, x(0.0)).unwrap();
        let y = |t: f64| x(t) * (kappa * t).exp();
        for (k, t) in grid.nodes().enumerate().skip(1) {
            let lhs = y(t) + simpson(|s| y(s) * (vp.a + vp.b * (t - s)), 0.0, t, 400);
            let f1 = vp.rhs.values()[k];
            assert!((lhs - f1).abs() < 1e-8 * f1.abs().max(1.0), "t={t}: {lhs} vs {f1}");
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let grid = Grid::new(0.0, 5.0, 101).unwrap();
        let p = params(1.0, 0.5, 1.0, 1.0, 0.5);
        let zero = GridFunction::zeros(grid);
        let vp = msd_reduce(&p, &zero, 0.0).unwrap();
        assert_eq!(vp.rhs.max_norm(), 0.0);
        assert_eq!(solve_msd(&p, &zero, 0.0).unwrap().max_norm(), 0.0);
    }

    #[test]
    fn residual_is_small() {
        let grid = Grid::new(0.0, 5.0, 4001).unwrap();
        let p = params(1.0, 0.5, 4.0, 1.0, 0.5);
        let f = GridFunction::from_fn(grid, f64::sin).unwrap();
        let x = solve_msd(&p, &f, 0.0).unwrap();
        let r = msd_residual(&p, &x, &f).unwrap().max_norm();
        assert!(r < 1e-3, "{r}");
    }

    #[test]
    fn effective_oscillator_oracle() {
        // Applying (ν d/dt + γ)² to the fractional equation gives the
        // classical oscillator
        //   (M + Δν + kν²) x'' + γ(Δ + 2kν) x' + kγ² x = ν²F'' + 2νγF' + γ²F
        // with x(0) = F(0)/k and x'(0) = νF'(0)/D0. Integrated with RK4.
        let (m, delta, k, sigma, gamma) = (1.0, 0.5, 4.0, 1.7, 0.7);
        let p = params(m, delta, k, sigma, gamma);
        let nu = 1.0 - gamma;
        let mass = m / sigma.powf(2.0 * nu);
        let damp = delta / sigma.powf(nu);
        let d0 = p.solvability_denominator().unwrap();
        let (me, de, ke) = (
            mass + damp * nu + k * nu * nu,
            gamma * (damp + 2.0 * k * nu),
            k * gamma * gamma,
        );
        let rhs = |t: f64| -nu * nu * t.sin() + 2.0 * nu * gamma * t.cos() + gamma * gamma * t.sin();
        let accel = |t: f64, x: f64, v: f64| (rhs(t) - de * v - ke * x) / me;
        let t1 = 6.0;
        let n = 6001;
        let grid = Grid::new(0.0, t1, n).unwrap();
        let h = grid.step();
        let (mut x, mut v) = (0.0, nu * 1.0 / d0);
        let mut reference = vec![x];
        for i in 0..n - 1 {
            let t = i as f64 * h;
            let (k1x, k1v) = (v, accel(t, x, v));
            let (k2x, k2v) = (
                v + 0.5 * h * k1v,
                accel(t + 0.5 * h, x + 0.5 * h * k1x, v + 0.5 * h * k1v),
            );
            let (k3x, k3v) = (
                v + 0.5 * h * k2v,
                accel(t + 0.5 * h, x + 0.5 * h * k2x, v + 0.5 * h * k2v),
            );
            let (k4x, k4v) = (v + h * k3v, accel(t + h, x + h * k3x, v + h * k3v));
            x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            reference.push(x);
        }
        let f = GridFunction::from_fn(grid, f64::sin).unwrap();
        let sol = solve_msd(&p, &f, 0.0).unwrap();
        let err = sol
            .values()
            .iter()
            .zip(&reference)
            .fold(0.0_f64, |e, (a, b)| e.max((a - b).abs()));
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn linear_in_forcing_and_start() {
        let grid = Grid::new(0.0, 3.0, 601).unwrap();
        let p = params(2.0, 0.3, 1.5, 0.8, 0.4);
        let f = GridFunction::from_fn(grid, |t| (2.0 * t).cos()).unwrap();
        let g = GridFunction::from_fn(grid, |t| t * (-t).exp()).unwrap();
        let combo = f.zip_with(&g, |a, b| 2.0 * a - 3.0 * b).unwrap();
        let xf = solve_msd(&p, &f, 0.7).unwrap();
        let xg = solve_msd(&p, &g, -0.2).unwrap();
        let x = solve_msd(&p, &combo, 2.0 * 0.7 - 3.0 * -0.2).unwrap();
        let sum = xf.zip_with(&xg, |a, b| 2.0 * a - 3.0 * b).unwrap();
        assert!(x.max_distance(&sum).unwrap() < 1e-12);
    }

    #[test]
    fn undamped_spring_keeps_oscillating() {
        let grid = Grid::new(0.0, 20.0, 4001).unwrap();
        let p = params(1.0, 0.0, 1.0, 1.0, 0.8);
        let f = GridFunction::from_fn(grid, |t| t * (-t).exp()).unwrap();
        let x = solve_msd(&p, &f, 0.0).unwrap();
        let changes = x.values()[1..].windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        assert!(changes >= 2, "{changes}");
    }

    #[test]
    fn sigma_is_irrelevant_near_integer_order() {
        let grid = Grid::new(0.0, 1.0, 10001).unwrap();
        let f = GridFunction::from_fn(grid, |t| t.sin()).unwrap();
        let base = solve_msd(&params(1.0, 0.5, 4.0, 1.0, 0.999), &f, 0.0).unwrap();
        for sigma in [0.5, 2.0] {
            let x = solve_msd(&params(1.0, 0.5, 4.0, sigma, 0.999), &f, 0.0).unwrap();
            let rel = x.max_distance(&base).unwrap() / base.max_norm();
            assert!(rel < 0.01, "σ={sigma}: {rel}");
        }
    }

    #[test]
    fn inconsistent_start_is_visible_in_residual() {
        let grid = Grid::new(0.0, 2.0, 401).unwrap();
        let p = params(1.0, 0.5, 4.0, 1.0, 0.5);
        let f = GridFunction::from_fn(grid, |_| 1.0).unwrap();
        assert_eq!(consistent_start(&p, &f), 0.25);
        let good = solve_msd(&p, &f, 0.25).unwrap();
        assert!(good.values().iter().all(|v| (v - 0.25).abs() < 1e-12));
        let bad = solve_msd(&p, &f, 0.0).unwrap();
        assert!(msd_residual(&p, &bad, &f).unwrap().values()[0].abs() > 0.5);
    }

    #[test]
    fn validation() {
        assert!(MsdParams::new(0.0, 0.0, 1.0, 1.0, 0.5).is_err());
        assert!(MsdParams::new(1.0, 0.0, -1.0, 1.0, 0.5).is_err());
        assert!(MsdParams::new(1.0, 0.0, 1.0, 0.0, 0.5).is_err());
        assert!(matches!(
            MsdParams::new(1.0, 0.0, 1.0, 1.0, 1.0),
            Err(Error::OrderOutOfRange { .. })
        ));
        // Negative damping that cancels the other two terms.
        let err = MsdParams::new(1.0, -2.5, 1.0, 1.0, 0.5).unwrap_err();
        assert!(matches!(err, Error::SolvabilityViolation { .. }));
    }

    #[test]
    fn long_horizon_overflow_is_reported() {
        let grid = Grid::new(0.0, 800.0, 101).unwrap();
        let p = params(1.0, 0.5, 4.0, 1.0, 0.5);
        let f = GridFunction::from_fn(grid, f64::sin).unwrap();
        assert!(matches!(msd_reduce(&p, &f, 0.0), Err(Error::NonFinite { .. })));
        assert!(solve_msd(&p, &f, 0.0).is_ok());
    }
}
