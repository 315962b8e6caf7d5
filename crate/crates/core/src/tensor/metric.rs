use nalgebra::{Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::exprkit::{eval, eval_jet, parse_expr, Expr, Jet, Point};

/// Which of the supported metric shapes a spec uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Walker,
    ConformalWalker,
    General,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Walker => "walker",
            MetricKind::ConformalWalker => "conformal_walker",
            MetricKind::General => "general",
        }
    }
}

/// A neutral-signature metric in coordinates `(u, v, x, y)`.
///
/// The walker kind is the block matrix
///
/// ```text
/// [[0, 0, 1, 0],
///  [0, 0, 0, 1],
///  [1, 0, a, c],
///  [0, 1, c, b]]
/// ```
///
/// and `conformal_walker` is `chi^2` times it.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    Walker { a: Expr, b: Expr, c: Expr },
    ConformalWalker { chi: Expr, a: Expr, b: Expr, c: Expr },
    /// Full symmetric component array; only the upper triangle is read.
    General { g: Box<[[Expr; 4]; 4]> },
}

impl MetricSpec {
    pub fn walker(a: Expr, b: Expr, c: Expr) -> MetricSpec {
        MetricSpec::Walker { a, b, c }
    }

    pub fn conformal_walker(chi: Expr, a: Expr, b: Expr, c: Expr) -> MetricSpec {
        MetricSpec::ConformalWalker { chi, a, b, c }
    }

    /// Build a general metric, symmetrizing from the upper triangle.
    pub fn general(g: [[Expr; 4]; 4]) -> MetricSpec {
        let sym = std::array::from_fn(|i| std::array::from_fn(|j| g[i.min(j)][i.max(j)].clone()));
        MetricSpec::General { g: Box::new(sym) }
    }

    /// Parse the three walker functions from strings.
    pub fn parse_walker(a: &str, b: &str, c: &str) -> Result<MetricSpec> {
        Ok(MetricSpec::walker(parse_expr(a)?, parse_expr(b)?, parse_expr(c)?))
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricSpec::Walker { .. } => MetricKind::Walker,
            MetricSpec::ConformalWalker { .. } => MetricKind::ConformalWalker,
            MetricSpec::General { .. } => MetricKind::General,
        }
    }

    /// `(a, b, c)` for the two walker kinds.
    pub fn walker_parts(&self) -> Option<(&Expr, &Expr, &Expr)> {
        match self {
            MetricSpec::Walker { a, b, c } | MetricSpec::ConformalWalker { a, b, c, .. } => Some((a, b, c)),
            MetricSpec::General { .. } => None,
        }
    }

    /// Conformal factor; `None` for plain walker and general kinds.
    pub fn chi(&self) -> Option<&Expr> {
        match self {
            MetricSpec::ConformalWalker { chi, .. } => Some(chi),
            _ => None,
        }
    }

    /// The underlying walker metric with the conformal factor dropped.
    pub fn walker_base(&self) -> Option<MetricSpec> {
        self.walker_parts().map(|(a, b, c)| MetricSpec::walker(a.clone(), b.clone(), c.clone()))
    }

    /// Component expressions `g_ij`.
    pub fn components(&self) -> [[Expr; 4]; 4] {
        match self {
            MetricSpec::General { g } => (**g).clone(),
            MetricSpec::Walker { a, b, c } => walker_components(a, b, c),
            MetricSpec::ConformalWalker { chi, a, b, c } => {
                let chi2 = Expr::pow(chi.clone(), 2);
                walker_components(a, b, c).map(|row| row.map(|e| Expr::mul(chi2.clone(), e)))
            }
        }
    }

    /// Numeric matrix at `p`.
    pub fn value_at(&self, p: &Point) -> Result<Matrix4<f64>> {
        let comps = self.components();
        let mut m = Matrix4::zeros();
        for i in 0..4 {
            for j in i..4 {
                let v = eval(&comps[i][j], p)?;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(m)
    }
}

fn walker_components(a: &Expr, b: &Expr, c: &Expr) -> [[Expr; 4]; 4] {
    let z = Expr::zero;
    let o = Expr::one;
    [
        [z(), z(), o(), z()],
        [z(), z(), z(), o()],
        [o(), z(), a.clone(), c.clone()],
        [z(), o(), c.clone(), b.clone()],
    ]
}

/// Metric components and their inverse as jets at one point.
#[derive(Debug, Clone)]
pub struct MetricJet {
    pub point: Point,
    pub order: usize,
    pub g: [[Jet; 4]; 4],
    pub ginv: [[Jet; 4]; 4],
}

impl MetricJet {
    pub fn g_value(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.g[i][j].value())
    }

    pub fn ginv_value(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.ginv[i][j].value())
    }

    /// `max |g ginv - I|` over entries.
    pub fn inverse_residual(&self) -> f64 {
        (self.g_value() * self.ginv_value() - Matrix4::identity()).amax()
    }
}

fn jet_matmul(a: &[[Jet; 4]; 4], b: &[[Jet; 4]; 4]) -> [[Jet; 4]; 4] {
    let order = a[0][0].order();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Jet::zero(order);
            for k in 0..4 {
                acc = acc.add(&a[i][k].mul(&b[k][j]));
            }
            acc
        })
    })
}

fn walker_inverse(a: &Jet, b: &Jet, c: &Jet) -> [[Jet; 4]; 4] {
    let order = a.order();
    let z = || Jet::zero(order);
    let o = || Jet::constant(1.0, order);
    [
        [a.neg(), c.neg(), o(), z()],
        [c.neg(), b.neg(), z(), o()],
        [o(), z(), z(), z()],
        [z(), o(), z(), z()],
    ]
}

/// Count of positive and negative eigenvalues, or `SingularMetric` when one is ~0.
pub fn check_signature(g: &Matrix4<f64>, p: &Point) -> Result<()> {
    let eig = SymmetricEigen::new(*g);
    let scale = eig.eigenvalues.amax().max(1e-300);
    if eig.eigenvalues.iter().any(|l| l.abs() <= 1e-12 * scale) {
        return Err(Error::SingularMetric { point: p.0 });
    }
    let positive = eig.eigenvalues.iter().filter(|l| **l > 0.0).count();
    let negative = 4 - positive;
    if positive != 2 {
        return Err(Error::Signature { point: p.0, positive, negative });
    }
    Ok(())
}

/// Jets of `g_ij` and `g^ij` at `p`, with a signature check.
pub fn metric_jet(spec: &MetricSpec, p: &Point, order: usize) -> Result<MetricJet> {
    let (g, ginv) = match spec {
        MetricSpec::Walker { a, b, c } => {
            let (ja, jb, jc) = (eval_jet(a, p, order)?, eval_jet(b, p, order)?, eval_jet(c, p, order)?);
            let ginv = walker_inverse(&ja, &jb, &jc);
            (walker_block(ja, jb, jc), ginv)
        }
        MetricSpec::ConformalWalker { chi, a, b, c } => {
            let jchi = eval_jet(chi, p, order)?;
            if jchi.value() <= 0.0 {
                return Err(Error::Domain {
                    expr: chi.to_string(),
                    reason: format!("conformal factor must be positive, got {:e}", jchi.value()),
                });
            }
            let chi2 = jchi.mul(&jchi);
            let inv2 = chi2.recip();
            let (ja, jb, jc) = (eval_jet(a, p, order)?, eval_jet(b, p, order)?, eval_jet(c, p, order)?);
            let ginv = walker_inverse(&ja, &jb, &jc).map(|row| row.map(|e| e.mul(&inv2)));
            let g = walker_block(ja, jb, jc).map(|row| row.map(|e| e.mul(&chi2)));
            (g, ginv)
        }
        MetricSpec::General { g: comps } => {
            let mut g: [[Jet; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Jet::zero(order)));
            for i in 0..4 {
                for j in i..4 {
                    let e = eval_jet(&comps[i][j], p, order)?;
                    g[j][i] = e.clone();
                    g[i][j] = e;
                }
            }
            let value = Matrix4::from_fn(|i, j| g[i][j].value());
            check_signature(&value, p)?;
            let x0 = value.try_inverse().ok_or(Error::SingularMetric { point: p.0 })?;
            // Newton iteration X <- X (2I - G X) doubles the number of correct orders each pass.
            let mut x: [[Jet; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| Jet::constant(x0[(i, j)], order)));
            let mut correct = 0usize;
            while correct < order {
                let gx = jet_matmul(&g, &x);
                let two_minus: [[Jet; 4]; 4] = std::array::from_fn(|i| {
                    std::array::from_fn(|j| gx[i][j].neg().add_const(if i == j { 2.0 } else { 0.0 }))
                });
                x = jet_matmul(&x, &two_minus);
                correct = 2 * correct + 1;
            }
            (g, x)
        }
    };
    let mj = MetricJet { point: *p, order, g, ginv };
    if !matches!(spec, MetricSpec::General { .. }) {
        check_signature(&mj.g_value(), p)?;
    }
    Ok(mj)
}

fn walker_block(a: Jet, b: Jet, c: Jet) -> [[Jet; 4]; 4] {
    let order = a.order();
    let z = || Jet::zero(order);
    let o = || Jet::constant(1.0, order);
    [[z(), z(), o(), z()], [z(), z(), z(), o()], [o(), z(), a, c.clone()], [z(), o(), c, b]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_block_is_its_own_inverse() {
        let spec = MetricSpec::parse_walker("0", "0", "0").unwrap();
        let mj = metric_jet(&spec, &Point::new(0.3, 1.2, -0.4, 2.0), 2).unwrap();
        let expected = Matrix4::new(0., 0., 1., 0., 0., 0., 0., 1., 1., 0., 0., 0., 0., 1., 0., 0.);
        assert_eq!(mj.g_value(), expected);
        assert_eq!(mj.ginv_value(), expected);
    }

    #[test]
    fn conformal_component() {
        let spec = MetricSpec::conformal_walker(
            parse_expr("1/v").unwrap(),
            parse_expr("u").unwrap(),
            parse_expr("1").unwrap(),
            parse_expr("0").unwrap(),
        );
        let mj = metric_jet(&spec, &Point::new(1.0, 2.0, 0.0, 0.0), 1).unwrap();
        assert!((mj.g[1][3].value() - 0.25).abs() < 1e-15);
        assert!(mj.inverse_residual() < 1e-12);
    }

    #[test]
    fn general_inverse_jets_match_walker() {
        let spec = MetricSpec::parse_walker("u^2*x", "exp(v*y)", "u*v + x").unwrap();
        let gen = MetricSpec::general(spec.components());
        let p = Point::new(0.7, 1.1, 0.9, 1.3);
        let w = metric_jet(&spec, &p, 3).unwrap();
        let g = metric_jet(&gen, &p, 3).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for ((_, x), (_, y)) in w.ginv[i][j].iter().zip(g.ginv[i][j].iter()) {
                    assert!((x - y).abs() < 1e-10, "{i}{j}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn riemannian_metric_rejected() {
        let one = Expr::one;
        let z = Expr::zero;
        let spec = MetricSpec::general([
            [one(), z(), z(), z()],
            [z(), one(), z(), z()],
            [z(), z(), one(), z()],
            [z(), z(), z(), one()],
        ]);
        assert!(matches!(
            metric_jet(&spec, &Point::new(0.0, 0.0, 0.0, 0.0), 1),
            Err(Error::Signature { positive: 4, .. })
        ));
    }
}
