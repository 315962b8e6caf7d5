// Parse an expression, differentiate it symbolically and through jets, and check
// both against finite differences.

use nullplane::exprkit::{diff_multi, eval, eval_jet, fd_derivative, parse_expr, simplify, Point};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let e = parse_expr("exp(4*x)*u^4/(3*v^2) + sin(u*y)")?;
    let p = Point::new(1.1, 0.9, 0.2, 0.7);
    println!("f        = {e}");
    println!("f(p)     = {:.12}", eval(&e, &p)?);

    let jet = eval_jet(&e, &p, 3)?;
    for mi in [[1, 0, 0, 0], [0, 2, 0, 0], [1, 1, 1, 0]] {
        let symbolic = eval(&diff_multi(&e, mi), &p)?;
        let fd = fd_derivative(&e, &p, mi, 1e-3)?;
        println!("d{mi:?}: jet {:+.10e}  symbolic {symbolic:+.10e}  fd {fd:+.6e}", jet.partial(mi));
        assert!((jet.partial(mi) - symbolic).abs() <= 1e-10 * symbolic.abs().max(1.0));
    }

    let s = simplify(&parse_expr("(u + v)^2 - u^2 - 2*u*v")?);
    println!("(u + v)^2 - u^2 - 2uv simplifies to {s}");

    match parse_expr("u + w") {
        Err(err) => println!("rejected: {err}"),
        Ok(_) => unreachable!("w is not a coordinate"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
