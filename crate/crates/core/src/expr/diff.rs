use super::{BinOp, Expr, ExprError, Func, Var};

/// Exact derivative of `e` with respect to `var`, simplified only by
/// constant folding and the 0/1 identities.
///
/// Powers need an exponent that does not mention `var`.
pub fn differentiate(e: &Expr, var: Var) -> Result<Expr, ExprError> {
    Ok(match e {
        Expr::Num(_) => num(0.0),
        Expr::Var(v) => num(if *v == var { 1.0 } else { 0.0 }),
        Expr::Neg(a) => neg(differentiate(a, var)?),
        Expr::Bin(op, a, b) => {
            let (a, b) = (a.as_ref(), b.as_ref());
            match op {
                BinOp::Add => add(differentiate(a, var)?, differentiate(b, var)?),
                BinOp::Sub => sub(differentiate(a, var)?, differentiate(b, var)?),
                BinOp::Mul => add(
                    mul(differentiate(a, var)?, b.clone()),
                    mul(a.clone(), differentiate(b, var)?),
                ),
                BinOp::Div => div(
                    sub(
                        mul(differentiate(a, var)?, b.clone()),
                        mul(a.clone(), differentiate(b, var)?),
                    ),
                    pow(b.clone(), num(2.0)),
                ),
                BinOp::Pow => {
                    if b.mentions(var) {
                        return Err(ExprError::UnsupportedDifferentiation(format!(
                            "exponent of `{e}` depends on {var}"
                        )));
                    }
                    mul(
                        mul(b.clone(), pow(a.clone(), sub(b.clone(), num(1.0)))),
                        differentiate(a, var)?,
                    )
                }
            }
        }
        Expr::Call(f, a) => {
            let inner = differentiate(a, var)?;
            let a = a.as_ref().clone();
            let outer = match f {
                Func::Sin => Expr::call(Func::Cos, a),
                Func::Cos => neg(Expr::call(Func::Sin, a)),
                Func::Exp => Expr::call(Func::Exp, a),
                Func::Log => return Ok(div(inner, a)),
                Func::Sqrt => return Ok(div(inner, mul(num(2.0), Expr::call(Func::Sqrt, a)))),
            };
            mul(outer, inner)
        }
    })
}

fn num(x: f64) -> Expr {
    Expr::Num(x)
}

fn as_num(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(x) => Some(*x),
        _ => None,
    }
}

/// Folds two literals when the result is finite.
fn fold(op: BinOp, a: &Expr, b: &Expr) -> Option<Expr> {
    let (x, y) = (as_num(a)?, as_num(b)?);
    op.apply(x, y).ok().filter(|v| v.is_finite()).map(num)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(x) => num(-x),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if let Some(v) = fold(BinOp::Add, &a, &b) {
        return v;
    }
    match (as_num(&a), as_num(&b)) {
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::bin(BinOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if let Some(v) = fold(BinOp::Sub, &a, &b) {
        return v;
    }
    match (as_num(&a), as_num(&b)) {
        (_, Some(0.0)) => a,
        (Some(0.0), _) => neg(b),
        _ => Expr::bin(BinOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if let Some(v) = fold(BinOp::Mul, &a, &b) {
        return v;
    }
    match (as_num(&a), as_num(&b)) {
        (Some(x), _) | (_, Some(x)) if x == 0.0 => num(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::bin(BinOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if let Some(v) = fold(BinOp::Div, &a, &b) {
        return v;
    }
    match (as_num(&a), as_num(&b)) {
        (Some(0.0), _) => num(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::bin(BinOp::Div, a, b),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    if let Some(v) = fold(BinOp::Pow, &a, &b) {
        return v;
    }
    match as_num(&b) {
        Some(1.0) => a,
        Some(0.0) => num(1.0),
        _ => Expr::bin(BinOp::Pow, a, b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Vars};
    use rand::{Rng, SeedableRng};

    fn d(src: &str) -> Expr {
        differentiate(&parse(src, Vars::TU).unwrap(), Var::T).unwrap()
    }

    #[test]
    fn power_rule() {
        assert_eq!(d("t^2").to_string(), "2*t");
    }

    #[test]
    fn constant_rule() {
        assert_eq!(d("5").to_string(), "0");
        assert_eq!(d("u^3"), Expr::Num(0.0));
    }

    #[test]
    fn product_with_exponential() {
        let e = d("t*exp(-t)");
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10 {
            let t: f64 = rng.gen_range(-2.0..3.0);
            let expected = (-t).exp() - t * (-t).exp();
            assert!((e.eval(t, None).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn variable_exponent_is_unsupported() {
        let e = parse("2^t", Vars::T).unwrap();
        assert!(matches!(
            differentiate(&e, Var::T),
            Err(ExprError::UnsupportedDifferentiation(_))
        ));
        // Exponent constant in t, varying in u.
        let e = parse("t^u", Vars::TU).unwrap();
        let dt = differentiate(&e, Var::T).unwrap();
        assert!((dt.eval(2.0, Some(3.0)).unwrap() - 12.0).abs() < 1e-12);
        assert!(differentiate(&e, Var::U).is_err());
    }

    #[test]
    fn partial_in_u() {
        let e = parse("sin(u)*t + u^2", Vars::TU).unwrap();
        let du = differentiate(&e, Var::U).unwrap();
        let (t, u) = (0.7, -1.3);
        assert!((du.eval(t, Some(u)).unwrap() - (u.cos() * t + 2.0 * u)).abs() < 1e-12);
    }
}
