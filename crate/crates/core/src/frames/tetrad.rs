use nalgebra::{Matrix4, Vector4};

use super::field::VectorField;
use crate::error::{Error, Result};
use crate::exprkit::{Expr, Point, Var};
use crate::tensor::MetricSpec;

/// Null tetrad `(ℓ, n, m, m̃)` with `g(ℓ,n) = 1`, `g(m,m̃) = −1` and all other pairings zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Tetrad {
    pub l: VectorField,
    pub n: VectorField,
    pub m: VectorField,
    pub mt: VectorField,
}

/// Tetrad vectors evaluated at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetradPoint {
    pub l: Vector4<f64>,
    pub n: Vector4<f64>,
    pub m: Vector4<f64>,
    pub mt: Vector4<f64>,
}

impl TetradPoint {
    /// The ten pairings `g(e_i, e_j)`, `i ≤ j`, minus their target values; returns the worst.
    pub fn normalization_error(&self, g: &Matrix4<f64>) -> f64 {
        let vs = [self.l, self.n, self.m, self.mt];
        // ℓ·n = 1, m·m̃ = −1
        let target = |i: usize, j: usize| match (i, j) {
            (0, 1) => 1.0,
            (2, 3) => -1.0,
            _ => 0.0,
        };
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in i..4 {
                let gij = vs[i].dot(&(g * vs[j]));
                worst = worst.max((gij - target(i, j)).abs());
            }
        }
        worst
    }
}

impl Tetrad {
    pub fn at(&self, p: &Point) -> Result<TetradPoint> {
        Ok(TetradPoint { l: self.l.at(p)?, n: self.n.at(p)?, m: self.m.at(p)?, mt: self.mt.at(p)? })
    }

    /// Every vector multiplied by `f`.
    pub fn rescaled(&self, f: &Expr) -> Tetrad {
        Tetrad { l: self.l.scaled(f), n: self.n.scaled(f), m: self.m.scaled(f), mt: self.mt.scaled(f) }
    }
}

/// `ℓ = ∂_u`, `m̃ = ∂_v`, `n = ∂_x − (a/2)∂_u − (c/2)∂_v`, `m = −∂_y + (c/2)∂_u + (b/2)∂_v`,
/// each divided by `χ` for the conformal kind.
pub fn walker_tetrad(spec: &MetricSpec) -> Result<Tetrad> {
    let (a, b, c) = spec.walker_parts().ok_or(Error::Kind { expected: "walker or conformal_walker" })?;
    let half = |e: &Expr| Expr::scale(0.5, e.clone());
    let tet = Tetrad {
        l: VectorField::coord(Var::U),
        mt: VectorField::coord(Var::V),
        n: VectorField::new([Expr::neg(half(a)), Expr::neg(half(c)), Expr::one(), Expr::zero()]),
        m: VectorField::new([half(c), half(b), Expr::zero(), Expr::Const(-1.0)]),
    };
    Ok(match spec.chi() {
        Some(chi) => tet.rescaled(&Expr::pow(chi.clone(), -1)),
        None => tet,
    })
}
