use rand::Rng;

use super::ast::{Expr, Func, Var};

/// Draw a random expression tree of at most `depth` levels.
///
/// Constants are short decimals in [-2, 2] so the printed form parses back exactly.
/// No attempt is made to avoid poles; callers filter on evaluation errors.
pub fn random_expr<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        return random_leaf(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, depth - 1);
    match rng.random_range(0..9) {
        0 | 1 => Expr::Add(Box::new(sub(rng)), Box::new(sub(rng))),
        2 => Expr::Sub(Box::new(sub(rng)), Box::new(sub(rng))),
        3 | 4 => Expr::Mul(Box::new(sub(rng)), Box::new(sub(rng))),
        5 => Expr::Div(Box::new(sub(rng)), Box::new(sub(rng))),
        6 => {
            let n = rng.random_range(-2..=3);
            Expr::Pow(Box::new(sub(rng)), n)
        }
        7 => {
            let f = Func::ALL[rng.random_range(0..Func::ALL.len())];
            Expr::Call(f, Box::new(sub(rng)))
        }
        _ => Expr::Neg(Box::new(sub(rng))),
    }
}

fn random_leaf<R: Rng + ?Sized>(rng: &mut R) -> Expr {
    if rng.random_bool(0.7) {
        Expr::Var(Var::ALL[rng.random_range(0..4)])
    } else {
        let c = (rng.random_range(-2.0..=2.0f64) * 100.0).round() / 100.0;
        if c == 0.0 {
            Expr::one()
        } else if c < 0.0 {
            // `-c` reads back as a negation
            Expr::Neg(Box::new(Expr::Const(-c)))
        } else {
            Expr::Const(c)
        }
    }
}
