use super::ast::{Expr, Func, Point};
use super::jet::Jet;
use crate::error::{Error, Result};

/// Relative size below which a denominator counts as a pole.
pub const POLE_GUARD: f64 = 1e-12;

fn domain(e: &Expr, reason: impl Into<String>) -> Error {
    Error::Domain { expr: e.to_string(), reason: reason.into() }
}

fn check_den(whole: &Expr, den_expr: &Expr, num: f64, den: f64) -> Result<()> {
    if !den.is_finite() || den.abs() < POLE_GUARD * num.abs().max(1.0) {
        return Err(domain(whole, format!("denominator `{den_expr}` is {den:e}")));
    }
    Ok(())
}

fn check_call(whole: &Expr, f: Func, x: f64) -> Result<()> {
    if f == Func::Ln && x <= 0.0 {
        return Err(domain(whole, format!("ln of non-positive value {x:e}")));
    }
    Ok(())
}

fn finite(whole: &Expr, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(domain(whole, "value is not finite"))
    }
}

/// Evaluate `e` at `p`.
pub fn eval(e: &Expr, p: &Point) -> Result<f64> {
    let value = match e {
        Expr::Const(c) => *c,
        Expr::Var(v) => p.get(*v),
        Expr::Neg(a) => -eval(a, p)?,
        Expr::Add(a, b) => eval(a, p)? + eval(b, p)?,
        Expr::Sub(a, b) => eval(a, p)? - eval(b, p)?,
        Expr::Mul(a, b) => eval(a, p)? * eval(b, p)?,
        Expr::Div(a, b) => {
            let num = eval(a, p)?;
            let den = eval(b, p)?;
            check_den(e, b, num, den)?;
            num / den
        }
        Expr::Pow(a, n) => {
            let base = eval(a, p)?;
            if *n < 0 {
                check_den(e, a, 1.0, base)?;
            }
            base.powi(*n)
        }
        Expr::Call(f, a) => {
            let x = eval(a, p)?;
            check_call(e, *f, x)?;
            f.apply(x)
        }
    };
    finite(e, value)
}

/// All partial derivatives of `e` at `p` up to `order`.
pub fn eval_jet(e: &Expr, p: &Point, order: usize) -> Result<Jet> {
    let jet = match e {
        Expr::Const(c) => Jet::constant(*c, order),
        Expr::Var(v) => Jet::variable(*v, p.get(*v), order),
        Expr::Neg(a) => eval_jet(a, p, order)?.neg(),
        Expr::Add(a, b) => eval_jet(a, p, order)?.add(&eval_jet(b, p, order)?),
        Expr::Sub(a, b) => eval_jet(a, p, order)?.sub(&eval_jet(b, p, order)?),
        Expr::Mul(a, b) => eval_jet(a, p, order)?.mul(&eval_jet(b, p, order)?),
        Expr::Div(a, b) => {
            let num = eval_jet(a, p, order)?;
            let den = eval_jet(b, p, order)?;
            check_den(e, b, num.value(), den.value())?;
            num.div(&den)
        }
        Expr::Pow(a, n) => {
            let base = eval_jet(a, p, order)?;
            if *n < 0 {
                check_den(e, a, 1.0, base.value())?;
            }
            base.powi(*n)
        }
        Expr::Call(f, a) => {
            let inner = eval_jet(a, p, order)?;
            check_call(e, *f, inner.value())?;
            inner.compose(&f.derivatives(inner.value(), order))
        }
    };
    if !jet.is_finite() {
        return Err(domain(e, "partial derivatives are not finite"));
    }
    Ok(jet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::parse_expr;

    #[test]
    fn scalar_values() {
        let p = Point::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(eval(&parse_expr("2*u*x + v^2").unwrap(), &p).unwrap(), 10.0);
        assert_eq!(eval(&parse_expr("exp(0)").unwrap(), &p).unwrap(), 1.0);
        let r = eval(&parse_expr("u^-2 * (2/3)").unwrap(), &p).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn exp_partials_are_one() {
        let j = eval_jet(&parse_expr("exp(x)").unwrap(), &Point::new(0.3, 0.2, 0.0, 0.1), 3).unwrap();
        for k in 0..=3u8 {
            assert!((j.partial([0, 0, k, 0]) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let p = Point::new(1.0, 0.0, 1.0, 1.0);
        match eval(&parse_expr("u + 1/v").unwrap(), &p) {
            Err(Error::Domain { expr, .. }) => assert_eq!(expr, "1/v"),
            other => panic!("{other:?}"),
        }
        match eval_jet(&parse_expr("ln(v - 1)").unwrap(), &Point::new(0.0, 0.5, 0.0, 0.0), 2) {
            Err(Error::Domain { expr, .. }) => assert_eq!(expr, "ln(v - 1)"),
            other => panic!("{other:?}"),
        }
        assert!(eval(&parse_expr("v^-3").unwrap(), &p).is_err());
    }
}
