//! Solvers for differential equations with the Caputo-Fabrizio fractional
//! derivative of order `1 < β ≤ 2`.
//!
//! - [`linear`]: closed-form solutions of `D^β u - λu = f`, dispatched on the
//!   sign of the reduced equation's discriminant, plus the three-term
//!   generalisation.
//! - [`nonlinear`]: Picard iteration for `D^β u = φ(t, u)`.
//! - [`msd`]: the fractional mass-spring-damper equation via a second-kind
//!   Volterra integral equation.
//! - [`operator`]: numerical Caputo-Fabrizio derivatives, used to verify every
//!   solution by substituting it back into its equation.
//! - [`expr`]: a small expression language with symbolic differentiation for
//!   user-supplied forcing terms.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod expr;
pub mod grid;
pub mod linear;
pub mod msd;
pub mod nonlinear;
pub mod operator;
pub mod quadrature;
pub mod volterra;

pub use error::{Error, Result};
pub use grid::{Grid, GridFunction};
pub use linear::{CaseTag, GeneralProblem, LinearProblem, ReducedOde, Solution};
pub use msd::MsdParams;
pub use nonlinear::{NonlinearProblem, PicardState};
pub use operator::CfOrder;
pub use volterra::VolterraProblem;
