use super::ast::{Expr, Func, Var};

/// Symbolic partial derivative. The result is lightly folded but not simplified.
pub fn diff_expr(e: &Expr, var: Var) -> Expr {
    match e {
        Expr::Const(_) => Expr::zero(),
        Expr::Var(v) => Expr::Const(if *v == var { 1.0 } else { 0.0 }),
        _ if !e.mentions(var) => Expr::zero(),
        Expr::Neg(a) => Expr::neg(diff_expr(a, var)),
        Expr::Add(a, b) => Expr::add(diff_expr(a, var), diff_expr(b, var)),
        Expr::Sub(a, b) => Expr::sub(diff_expr(a, var), diff_expr(b, var)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(diff_expr(a, var), (**b).clone()),
            Expr::mul((**a).clone(), diff_expr(b, var)),
        ),
        Expr::Div(a, b) => {
            // (a/b)' = a'/b - a b'/b^2
            let da = diff_expr(a, var);
            let db = diff_expr(b, var);
            Expr::sub(
                Expr::div(da, (**b).clone()),
                Expr::div(Expr::mul((**a).clone(), db), Expr::pow((**b).clone(), 2)),
            )
        }
        Expr::Pow(a, n) => Expr::mul(
            Expr::scale(*n as f64, Expr::pow((**a).clone(), n - 1)),
            diff_expr(a, var),
        ),
        Expr::Call(f, a) => {
            let inner = (**a).clone();
            let outer = match f {
                Func::Exp => Expr::call(Func::Exp, inner),
                Func::Ln => Expr::pow(inner, -1),
                Func::Sin => Expr::call(Func::Cos, inner),
                Func::Cos => Expr::neg(Expr::call(Func::Sin, inner)),
                Func::Sinh => Expr::call(Func::Cosh, inner),
                Func::Cosh => Expr::call(Func::Sinh, inner),
            };
            Expr::mul(outer, diff_expr(a, var))
        }
    }
}

/// Apply `diff_expr` once per entry of a multi-index.
pub fn diff_multi(e: &Expr, mi: [u8; 4]) -> Expr {
    let mut out = e.clone();
    for var in Var::ALL {
        for _ in 0..mi[var.index()] {
            out = diff_expr(&out, var);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::{eval, parse_expr, Point};

    fn at(e: &Expr, p: [f64; 4]) -> f64 {
        eval(e, &Point(p)).unwrap()
    }

    #[test]
    fn simple_derivatives() {
        let d = diff_expr(&parse_expr("u*v^2").unwrap(), Var::V);
        assert!((at(&d, [1.5, 2.0, 0.0, 0.0]) - 6.0).abs() < 1e-14);
        assert_eq!(diff_expr(&parse_expr("v").unwrap(), Var::X), Expr::zero());
    }

    #[test]
    fn quotient_and_exp() {
        let e = parse_expr("exp(4*x)*u^4/(3*v^2)").unwrap();
        let d = diff_expr(&e, Var::U);
        let expected = parse_expr("4*exp(4*x)*u^3/(3*v^2)").unwrap();
        for p in [[1.0, 1.0, 0.0, 0.0], [0.7, 1.3, 0.2, 0.9], [1.4, 0.6, -0.3, 0.1]] {
            assert!((at(&d, p) - at(&expected, p)).abs() < 1e-12 * at(&expected, p).abs().max(1.0));
        }
    }
}
