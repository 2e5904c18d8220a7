//! Closed-form solution of `D^β u - λu = f` on a uniform grid.
//!
//! Substituting `v(t) = u(t) e^{κ(t-a)}`, `κ = α/(1-α)`, and differentiating
//! once turns the fractional equation into
//!
//! ```text
//! v'' - μ1 v' + μ2 v = g,   μ1 = 2κ + λ(1-α),   μ2 = κ²,
//! g(t) = [(1-α) f'(t) + α f(t)] e^{κ(t-a)}
//! ```
//!
//! whose characteristic discriminant is `A(λ) = 4λα + λ²(1-α)²`. The general
//! solution is written with variation of parameters: two fundamental
//! solutions plus products `p_i(t) ∫_a^t q_i(s) g(s) ds`, where every
//! antiderivative is a cumulative trapezoidal integral from `a`. The free
//! constants are fitted to `u(a)` and `u'(a)`.
//!
//! Evaluating the fractional equation at `t = a`, where the derivative
//! vanishes, gives `-λ u(a) = f(a)`. For `λ ≠ 0` any other `u(a)` leaves the
//! defect `(λu(a) + f(a)) e^{-κ(t-a)}`, which shows up in
//! [`Solution::residual_norm`].

use crate::error::{Error, Result};
use crate::grid::{Grid, GridFunction};
use crate::operator::{cf_d_beta, cf_d_gamma, CfOrder};
use crate::quadrature::cumulative_integral;

/// Below this root separation the repeated-root formula is used.
const ROOT_SEPARATION_FLOOR: f64 = 1e-6;

/// Residual tolerance of [`general_reduction_self_test`].
pub const GENERAL_SELF_TEST_TOLERANCE: f64 = 1e-4;

/// Sign class of the discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// Repeated real root (`A = 0`).
    Degenerate,
    /// Two distinct real roots (`A > 0`).
    Positive,
    /// Complex pair (`A < 0`), oscillatory solutions.
    Negative,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Degenerate => "degenerate",
            CaseTag::Positive => "positive",
            CaseTag::Negative => "negative",
        }
    }

    fn classify(disc: f64, scale: f64) -> Self {
        if disc.abs() <= 1e-12 * scale.max(1.0) {
            CaseTag::Degenerate
        } else if disc > 0.0 {
            CaseTag::Positive
        } else {
            CaseTag::Negative
        }
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Data of `D^β u - λu = f` on `[a, t1]` with `u(a)`, `u'(a)` prescribed.
#[derive(Debug, Clone)]
pub struct LinearProblem {
    pub order: CfOrder,
    pub lambda: f64,
    pub a: f64,
    pub f: GridFunction,
    pub f_prime: GridFunction,
    pub u_a: f64,
    pub up_a: f64,
}

impl LinearProblem {
    /// The interval start `a` is taken from the forcing grid.
    pub fn new(
        order: CfOrder,
        lambda: f64,
        f: GridFunction,
        f_prime: GridFunction,
        u_a: f64,
        up_a: f64,
    ) -> Result<Self> {
        if f.grid() != f_prime.grid() {
            return Err(Error::GridMismatch);
        }
        for (name, v) in [("lambda", lambda), ("u_a", u_a), ("up_a", up_a)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite".into(),
                });
            }
        }
        Ok(Self {
            order,
            lambda,
            a: f.grid().t0(),
            f,
            f_prime,
            u_a,
            up_a,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }
}

/// Constant-coefficient equation `v'' - μ1 v' + μ2 v = g` in
/// `v(t) = u(t) e^{κ(t-a)}`.
#[derive(Debug, Clone)]
pub struct ReducedOde {
    pub mu1: f64,
    pub mu2: f64,
    pub g: GridFunction,
    pub discriminant: f64,
    pub case_tag: CaseTag,
}

/// A solved linear problem.
#[derive(Debug, Clone)]
pub struct Solution {
    pub u: GridFunction,
    /// Coefficients of the two fundamental solutions.
    pub constants: (f64, f64),
    pub case_tag: CaseTag,
    /// Max-norm of the equation residual, evaluated with the numerical
    /// Caputo-Fabrizio operators on the solution grid.
    pub residual_norm: f64,
}

/// `A(λ) = 4λα + λ²(1-α)²` and its sign class.
pub fn discriminant_case(order: CfOrder, lambda: f64) -> Result<(f64, CaseTag)> {
    order.kernel_rate()?;
    let alpha = order.alpha();
    let disc = 4.0 * lambda * alpha + lambda * lambda * (1.0 - alpha) * (1.0 - alpha);
    Ok((disc, CaseTag::classify(disc, lambda * lambda)))
}

/// Reduced equation of a [`LinearProblem`].
pub fn reduce(problem: &LinearProblem) -> Result<ReducedOde> {
    let (mu1, mu2, kappa) = coefficients(problem)?;
    let ghat = forcing_combination(problem.order, &problem.f, &problem.f_prime, 1.0)?;
    let (discriminant, case_tag) = discriminant_case(problem.order, problem.lambda)?;
    let a = problem.a;
    Ok(ReducedOde {
        mu1,
        mu2,
        g: ghat.map(|t, v| v * (kappa * (t - a)).exp())?,
        discriminant,
        case_tag,
    })
}

/// Solves a [`LinearProblem`] with the branch formula selected by the sign of
/// `A(λ)`.
pub fn solve(problem: &LinearProblem) -> Result<Solution> {
    let f_a = problem.f.first();
    if f_a.abs() > 1e-12 * problem.f.max_norm() {
        return Err(Error::NonzeroForcingAtStart { value: f_a });
    }
    let (mu1, _, kappa) = coefficients(problem)?;
    let (disc, case_tag) = discriminant_case(problem.order, problem.lambda)?;
    let ghat = forcing_combination(problem.order, &problem.f, &problem.f_prime, 1.0)?;
    let branch = Branch::select(mu1, disc, case_tag, kappa);
    let (u, constants) = branch.solve(&ghat, problem.u_a, problem.up_a)?;

    let lambda = problem.lambda;
    let lhs = cf_d_beta(&u, problem.order, problem.a)?;
    let residual_norm = residual_max(
        lhs.values()
            .iter()
            .zip(u.values())
            .zip(problem.f.values())
            .map(|((d, u), f)| d - lambda * u - f),
    );
    Ok(Solution {
        u,
        constants,
        case_tag,
        residual_norm,
    })
}

/// The three-term equation `a D^{1+α} u + b D^α u + c u = h`.
#[derive(Debug, Clone)]
pub struct GeneralProblem {
    pub a_coef: f64,
    pub b_coef: f64,
    pub c_coef: f64,
    pub order: CfOrder,
    pub h: GridFunction,
    pub h_prime: GridFunction,
    pub u_a: f64,
    pub up_a: f64,
}

/// Reduces `a D^{1+α} u + b D^α u + c u = h` to an equation in
/// `v = u e^{κ(t-t0)}`.
///
/// Multiplying by `(1-α) e^{κt}` and differentiating gives
///
/// ```text
/// a(v'' - 2κv' + κ²v) + b(v' - κv) + c(1-α) v' = [(1-α) h' + α h] e^{κt}
/// ```
///
/// returned in the `v'' - μ1 v' + μ2 v = g` normalisation with
/// `μ1 = 2κ - b/a - c(1-α)/a`, `μ2 = κ² - bκ/a` (which may be negative).
/// The undifferentiated equation additionally pins `c·u(t0) = h(t0)`.
pub fn reduce_general(
    a_coef: f64,
    b_coef: f64,
    c_coef: f64,
    order: CfOrder,
    h: &GridFunction,
    h_prime: &GridFunction,
) -> Result<ReducedOde> {
    let (mu1, mu2, kappa) = general_coefficients(a_coef, b_coef, c_coef, order)?;
    let ghat = forcing_combination(order, h, h_prime, 1.0 / a_coef)?;
    let t0 = h.grid().t0();
    let discriminant = mu1 * mu1 - 4.0 * mu2;
    Ok(ReducedOde {
        mu1,
        mu2,
        g: ghat.map(|t, v| v * (kappa * (t - t0)).exp())?,
        discriminant,
        case_tag: CaseTag::classify(discriminant, mu1 * mu1),
    })
}

/// Solves a [`GeneralProblem`] through its reduction; the residual is
/// `a D^{1+α} u + b D^α u + c u - h`.
pub fn solve_general(problem: &GeneralProblem) -> Result<Solution> {
    let GeneralProblem {
        a_coef,
        b_coef,
        c_coef,
        order,
        ..
    } = *problem;
    if problem.h.grid() != problem.h_prime.grid() {
        return Err(Error::GridMismatch);
    }
    let (mu1, mu2, kappa) = general_coefficients(a_coef, b_coef, c_coef, order)?;
    let disc = mu1 * mu1 - 4.0 * mu2;
    let case_tag = CaseTag::classify(disc, mu1 * mu1);
    let ghat = forcing_combination(order, &problem.h, &problem.h_prime, 1.0 / a_coef)?;
    let branch = Branch::select(mu1, disc, case_tag, kappa);
    let (u, constants) = branch.solve(&ghat, problem.u_a, problem.up_a)?;

    let t0 = u.grid().t0();
    let d_beta = cf_d_beta(&u, order, t0)?;
    let d_alpha = cf_d_gamma(&u, order.alpha())?;
    let residual_norm = residual_max((0..u.grid().len()).map(|k| {
        a_coef * d_beta.values()[k] + b_coef * d_alpha.values()[k] + c_coef * u.values()[k] - problem.h.values()[k]
    }));
    Ok(Solution {
        u,
        constants,
        case_tag,
        residual_norm,
    })
}

/// Solves the general equation for `h(t) = t² e^{-t}` on `[0, 2]` with 4001
/// nodes and zero initial data, returning the residual max-norm. A correct
/// reduction keeps it below [`GENERAL_SELF_TEST_TOLERANCE`].
pub fn general_reduction_self_test(a_coef: f64, b_coef: f64, c_coef: f64, order: CfOrder) -> Result<f64> {
    let grid = Grid::new(0.0, 2.0, 4001)?;
    let h = GridFunction::from_fn(grid, |t| t * t * (-t).exp())?;
    let h_prime = GridFunction::from_fn(grid, |t| (2.0 * t - t * t) * (-t).exp())?;
    let problem = GeneralProblem {
        a_coef,
        b_coef,
        c_coef,
        order,
        h,
        h_prime,
        u_a: 0.0,
        up_a: 0.0,
    };
    Ok(solve_general(&problem)?.residual_norm)
}

fn coefficients(problem: &LinearProblem) -> Result<(f64, f64, f64)> {
    let kappa = problem.order.kernel_rate()?;
    let mu1 = 2.0 * kappa + problem.lambda * (1.0 - problem.order.alpha());
    Ok((mu1, kappa * kappa, kappa))
}

fn general_coefficients(a_coef: f64, b_coef: f64, c_coef: f64, order: CfOrder) -> Result<(f64, f64, f64)> {
    if a_coef == 0.0 {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    for (name, v) in [("a", a_coef), ("b", b_coef), ("c", c_coef)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter {
                name,
                reason: "must be finite".into(),
            });
        }
    }
    let kappa = order.kernel_rate()?;
    let alpha = order.alpha();
    let mu1 = 2.0 * kappa - (b_coef + c_coef * (1.0 - alpha)) / a_coef;
    let mu2 = kappa * kappa - b_coef * kappa / a_coef;
    Ok((mu1, mu2, kappa))
}

/// `scale·[(1-α) f' + α f]`, the forcing of the reduced equation without its
/// exponential factor.
fn forcing_combination(order: CfOrder, f: &GridFunction, f_prime: &GridFunction, scale: f64) -> Result<GridFunction> {
    let alpha = order.alpha();
    f.zip_with(f_prime, |v, dv| scale * ((1.0 - alpha) * dv + alpha * v))
}

fn residual_max(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0_f64, |m, r| m.max(r.abs()))
}

/// Branch formula, expressed directly in `u = v e^{-κτ}`, `τ = t - a`.
/// Exponents are root minus `κ`, so no `e^{κt}` factor is ever formed.
#[derive(Debug, Clone, Copy)]
enum Branch {
    /// `u = e^{eτ}[c1 + c2 τ + τ ∫ e^{-eσ} ĝ - ∫ σ e^{-eσ} ĝ]`
    Repeated { e: f64 },
    /// `u = c1 e^{e+ τ} + c2 e^{e- τ} + (e^{e+ τ} ∫ e^{-e+ σ} ĝ - e^{e- τ} ∫ e^{-e- σ} ĝ)/d`
    Distinct { e_plus: f64, e_minus: f64, d: f64 },
    /// `u = e^{eτ}[c1 cos ωτ + c2 sin ωτ + (sin ωτ ∫ e^{-eσ} cos ωσ ĝ - cos ωτ ∫ e^{-eσ} sin ωσ ĝ)/ω]`
    Oscillatory { e: f64, omega: f64 },
}

impl Branch {
    fn select(mu1: f64, disc: f64, case_tag: CaseTag, shift: f64) -> Self {
        let half = 0.5 * mu1 - shift;
        match case_tag {
            CaseTag::Positive if disc.sqrt() >= ROOT_SEPARATION_FLOOR => {
                let d = disc.sqrt();
                Branch::Distinct {
                    e_plus: half + 0.5 * d,
                    e_minus: half - 0.5 * d,
                    d,
                }
            }
            CaseTag::Negative if (-disc).sqrt() >= ROOT_SEPARATION_FLOOR => Branch::Oscillatory {
                e: half,
                omega: 0.5 * (-disc).sqrt(),
            },
            _ => Branch::Repeated { e: half },
        }
    }

    /// Values and first derivatives of the fundamental pair at `τ = 0`.
    fn start_values(&self) -> [[f64; 2]; 2] {
        match *self {
            Branch::Repeated { e } => [[1.0, 0.0], [e, 1.0]],
            Branch::Distinct { e_plus, e_minus, .. } => [[1.0, 1.0], [e_plus, e_minus]],
            Branch::Oscillatory { e, omega } => [[1.0, 0.0], [e, omega]],
        }
    }

    fn fundamental(&self, tau: f64) -> (f64, f64) {
        match *self {
            Branch::Repeated { e } => {
                let x = (e * tau).exp();
                (x, tau * x)
            }
            Branch::Distinct { e_plus, e_minus, .. } => ((e_plus * tau).exp(), (e_minus * tau).exp()),
            Branch::Oscillatory { e, omega } => {
                let x = (e * tau).exp();
                (x * (omega * tau).cos(), x * (omega * tau).sin())
            }
        }
    }

    /// `(p1, q1, p2, q2)` at `τ` with the particular solution
    /// `p1(τ) ∫ q1 ĝ + p2(τ) ∫ q2 ĝ`.
    fn particular_factors(&self, tau: f64) -> (f64, f64, f64, f64) {
        match *self {
            Branch::Repeated { e } => {
                let grow = (e * tau).exp();
                let weight = (-e * tau).exp();
                (tau * grow, weight, -grow, tau * weight)
            }
            Branch::Distinct { e_plus, e_minus, d } => (
                (e_plus * tau).exp() / d,
                (-e_plus * tau).exp(),
                -(e_minus * tau).exp() / d,
                (-e_minus * tau).exp(),
            ),
            Branch::Oscillatory { e, omega } => {
                let grow = (e * tau).exp();
                let weight = (-e * tau).exp();
                let (s, c) = (omega * tau).sin_cos();
                (grow * s / omega, weight * c, -grow * c / omega, weight * s)
            }
        }
    }

    /// Builds `u` on the forcing grid with `u(a) = u_a`, `u'(a) = up_a`.
    ///
    /// The particular part and its Leibniz-rule derivative both vanish at
    /// `τ = 0` (the boundary terms cancel since `p1 q1 + p2 q2 = 0` there),
    /// so the constants solve a 2×2 system in the fundamental pair alone.
    fn solve(&self, ghat: &GridFunction, u_a: f64, up_a: f64) -> Result<(GridFunction, (f64, f64))> {
        let grid = *ghat.grid();
        let t0 = grid.t0();
        let [[y1, y2], [dy1, dy2]] = self.start_values();
        let det = y1 * dy2 - y2 * dy1;
        let scale = y1.abs().max(y2.abs()) * dy1.abs().max(dy2.abs()).max(1.0);
        if !(det.abs() > 1e-14 * scale) {
            return Err(Error::SingularConstantFit { determinant: det });
        }
        let c1 = (u_a * dy2 - y2 * up_a) / det;
        let c2 = (y1 * up_a - dy1 * u_a) / det;

        let n = grid.len();
        let mut factors = Vec::with_capacity(n);
        let mut w1 = Vec::with_capacity(n);
        let mut w2 = Vec::with_capacity(n);
        for (t, g) in grid.nodes().zip(ghat.values()) {
            let f = self.particular_factors(t - t0);
            w1.push(f.1 * g);
            w2.push(f.3 * g);
            factors.push(f);
        }
        let j1 = cumulative_integral(&GridFunction::new(grid, w1)?);
        let j2 = cumulative_integral(&GridFunction::new(grid, w2)?);

        let values = grid
            .nodes()
            .enumerate()
            .map(|(k, t)| {
                let (phi1, phi2) = self.fundamental(t - t0);
                let (p1, _, p2, _) = factors[k];
                c1 * phi1 + c2 * phi2 + p1 * j1.values()[k] + p2 * j2.values()[k]
            })
            .collect();
        Ok((GridFunction::new(grid, values)?, (c1, c2)))
    }
}
