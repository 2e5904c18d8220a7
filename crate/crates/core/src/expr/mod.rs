//! Expressions in `t` (and optionally `u`) for forcing terms and
//! nonlinearities, with evaluation and exact symbolic differentiation.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' factor)?
//! atom   := NUMBER | 't' | 'u' | IDENT '(' expr ')' | '(' expr ')'
//! ```

mod diff;
mod parser;

use std::fmt;

use thiserror::Error;

pub use diff::differentiate;
pub use parser::{parse, MAX_DEPTH};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("domain error: {0}")]
    EvalDomain(String),
    #[error("variable `{0}` has no value")]
    MissingVariable(Var),
    #[error("cannot differentiate: {0}")]
    UnsupportedDifferentiation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    U,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::T => "t",
            Var::U => "u",
        })
    }
}

/// Which variables an expression may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vars {
    /// Forcing terms: `t` only.
    T,
    /// Nonlinearities: `t` and `u`.
    TU,
}

impl Vars {
    fn allows(self, v: Var) -> bool {
        matches!((self, v), (_, Var::T) | (Vars::TU, Var::U))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(&self, x: f64) -> Result<f64, ExprError> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Exp => Ok(x.exp()),
            Func::Log if x > 0.0 => Ok(x.ln()),
            Func::Log => Err(ExprError::EvalDomain(format!("log of non-positive value {x}"))),
            Func::Sqrt if x >= 0.0 => Ok(x.sqrt()),
            Func::Sqrt => Err(ExprError::EvalDomain(format!("sqrt of negative value {x}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }

    pub(crate) fn apply(&self, a: f64, b: f64) -> Result<f64, ExprError> {
        let v = match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div if b == 0.0 => return Err(ExprError::EvalDomain(format!("division of {a} by zero"))),
            BinOp::Div => a / b,
            BinOp::Pow => a.powf(b),
        };
        Ok(v)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Self {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: Expr) -> Self {
        Expr::Call(f, Box::new(a))
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(v),
            Expr::Bin(_, a, b) => a.mentions(v) || b.mentions(v),
        }
    }

    pub fn is_constant(&self) -> bool {
        !self.mentions(Var::T) && !self.mentions(Var::U)
    }

    /// Evaluates at `t` and, if given, `u`. Domain violations and
    /// non-finite intermediate results are errors, never NaN.
    pub fn eval(&self, t: f64, u: Option<f64>) -> Result<f64, ExprError> {
        let v = match self {
            Expr::Num(x) => *x,
            Expr::Var(Var::T) => t,
            Expr::Var(Var::U) => u.ok_or(ExprError::MissingVariable(Var::U))?,
            Expr::Neg(a) => -a.eval(t, u)?,
            Expr::Bin(op, a, b) => op.apply(a.eval(t, u)?, b.eval(t, u)?)?,
            Expr::Call(f, a) => f.apply(a.eval(t, u)?)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::EvalDomain(format!("`{self}` is not finite at t={t}")))
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => 3,
            Expr::Num(x) if *x < 0.0 => 3,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, paren: bool| {
            if paren {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, a.precedence() < 4)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                let (left_paren, right_paren) = match op {
                    BinOp::Pow => (a.precedence() <= p, b.precedence() < 3),
                    // Right operands of equal precedence keep their parentheses so
                    // the printed form reparses to the same tree.
                    _ => (a.precedence() < p, b.precedence() <= p),
                };
                wrap(f, a, left_paren)?;
                f.write_str(op.symbol())?;
                wrap(f, b, right_paren)
            }
        }
    }
}
