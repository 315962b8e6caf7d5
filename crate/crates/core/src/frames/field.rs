use nalgebra::Vector4;

use crate::error::Result;
use crate::exprkit::{eval, Expr, Jet, Point, Var};
use crate::tensor::jets_of;

/// A vector field given by its coordinate components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comps: [Expr; 4],
}

impl VectorField {
    pub fn new(comps: [Expr; 4]) -> VectorField {
        VectorField { comps }
    }

    /// The coordinate field `∂_var`.
    pub fn coord(var: Var) -> VectorField {
        VectorField { comps: std::array::from_fn(|i| Expr::Const(if i == var.index() { 1.0 } else { 0.0 })) }
    }

    pub fn zero() -> VectorField {
        VectorField { comps: std::array::from_fn(|_| Expr::zero()) }
    }

    pub fn scaled(&self, f: &Expr) -> VectorField {
        VectorField { comps: self.comps.clone().map(|c| Expr::mul(f.clone(), c)) }
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        let mut comps = self.comps.clone();
        for (c, o) in comps.iter_mut().zip(&other.comps) {
            *c = Expr::add(c.clone(), o.clone());
        }
        VectorField { comps }
    }

    /// `f X + g Y`.
    pub fn combine(f: &Expr, x: &VectorField, g: &Expr, y: &VectorField) -> VectorField {
        x.scaled(f).add(&y.scaled(g))
    }

    pub fn at(&self, p: &Point) -> Result<Vector4<f64>> {
        let mut v = Vector4::zeros();
        for (i, c) in self.comps.iter().enumerate() {
            v[i] = eval(c, p)?;
        }
        Ok(v)
    }

    pub fn jets(&self, p: &Point, order: usize) -> Result<[Jet; 4]> {
        jets_of(&self.comps, p, order)
    }
}

/// `[X, Y]^a = X^b ∂_b Y^a − Y^b ∂_b X^a` from order-1 jets.
pub fn lie_bracket(x: &[Jet; 4], y: &[Jet; 4]) -> Vector4<f64> {
    Vector4::from_fn(|a, _| {
        (0..4)
            .map(|b| {
                let var = Var::from_index(b);
                x[b].value() * y[a].d(var) - y[b].value() * x[a].d(var)
            })
            .sum()
    })
}
