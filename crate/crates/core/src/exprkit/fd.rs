//! Central finite differences, kept independent of the jet code so it can act as an oracle.
//!
//! Each coordinate gets its own one-dimensional central stencil and the stencils
//! are combined as a tensor product. The truncation error is O(step²) for every
//! multi-index of total order at most 3.

use super::ast::{Expr, Point};
use super::eval::eval;
use crate::error::{Error, Result};

fn stencil(order: u8) -> &'static [(i32, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        3 => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
        _ => unreachable!(),
    }
}

/// Estimate the partial derivative of `e` at `p` for multi-index `mi` (total order ≤ 3).
pub fn fd_derivative(e: &Expr, p: &Point, mi: [u8; 4], step: f64) -> Result<f64> {
    let total: u8 = mi.iter().sum();
    if total > 3 {
        return Err(Error::Config(format!("finite differences support total order 3, got {total}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    let stencils = mi.map(stencil);
    let mut sum = 0.0;
    for &(ou, wu) in stencils[0] {
        for &(ov, wv) in stencils[1] {
            for &(ox, wx) in stencils[2] {
                for &(oy, wy) in stencils[3] {
                    let q = p.shifted([ou, ov, ox, oy].map(|o| o as f64 * step));
                    sum += wu * wv * wx * wy * eval(e, &q)?;
                }
            }
        }
    }
    Ok(sum / step.powi(total as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::parse_expr;

    #[test]
    fn known_values() {
        let d = fd_derivative(&parse_expr("u^2").unwrap(), &Point::new(1.0, 1.0, 1.0, 1.0), [1, 0, 0, 0], 1e-3).unwrap();
        assert!((d - 2.0).abs() < 1e-6);
        let d = fd_derivative(&parse_expr("u*v").unwrap(), &Point::new(0.3, 0.8, 0.0, 0.0), [1, 1, 0, 0], 1e-3).unwrap();
        assert!((d - 1.0).abs() < 1e-5);
        let d = fd_derivative(&parse_expr("1/v").unwrap(), &Point::new(0.0, 2.0, 0.0, 0.0), [0, 1, 0, 0], 1e-3).unwrap();
        assert!((d + 0.25).abs() < 1e-6);
        let d = fd_derivative(&parse_expr("x^3").unwrap(), &Point::new(0.0, 0.0, 0.7, 0.0), [0, 0, 3, 0], 1e-2).unwrap();
        assert!((d - 6.0).abs() < 1e-6);
    }

    #[test]
    fn rejects_high_order() {
        assert!(fd_derivative(&Expr::one(), &Point::new(0.0, 0.0, 0.0, 0.0), [2, 2, 0, 0], 1e-3).is_err());
    }
}
