use nalgebra::{Matrix4, Vector4};

use super::curvature::Tensor4;
use crate::error::{Error, Result};
use crate::exprkit::Point;

/// `X ∧ Y` as a contravariant bivector `X^a Y^b − X^b Y^a`.
pub fn wedge(x: &Vector4<f64>, y: &Vector4<f64>) -> Matrix4<f64> {
    x * y.transpose() - y * x.transpose()
}

fn perm_sign(p: [usize; 4]) -> f64 {
    let mut s = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

/// Volume form at a point and the induced Hodge star on bivectors.
#[derive(Debug, Clone)]
pub struct DualOperator {
    pub point: Point,
    /// Orientation sign chosen by calibration.
    pub sign: f64,
    eps_down: Tensor4,
    /// `ε^ab_cd`
    eps_mixed: Tensor4,
    g: Matrix4<f64>,
    ginv: Matrix4<f64>,
}

impl DualOperator {
    fn with_sign(g: &Matrix4<f64>, ginv: &Matrix4<f64>, sign: f64, point: Point) -> DualOperator {
        let vol = g.determinant().abs().sqrt();
        let eps_down = Tensor4::from_fn(|a, b, c, d| sign * vol * perm_sign([a, b, c, d]));
        let half = Tensor4::from_fn(|e, f, c, d| {
            (0..4).map(|h| ginv[(f, h)] * eps_down.get(e, h, c, d)).sum()
        });
        let eps_mixed = half.raise_first(ginv);
        DualOperator { point, sign, eps_down, eps_mixed, g: *g, ginv: *ginv }
    }

    /// `*P^ab = ½ ε^ab_cd P^cd`.
    pub fn star(&self, p: &Matrix4<f64>) -> Matrix4<f64> {
        Matrix4::from_fn(|a, b| {
            let mut s = 0.0;
            for c in 0..4 {
                for d in 0..4 {
                    s += self.eps_mixed.get(a, b, c, d) * p[(c, d)];
                }
            }
            0.5 * s
        })
    }

    pub fn epsilon(&self) -> &Tensor4 {
        &self.eps_down
    }

    /// Right dual `½ T_ab^ef ε_efcd` of an all-lower tensor.
    pub fn right_dual(&self, t: &Tensor4) -> Tensor4 {
        let raised = raise_last_pair(t, &self.ginv);
        Tensor4::from_fn(|a, b, c, d| {
            let mut s = 0.0;
            for e in 0..4 {
                for f in 0..4 {
                    s += raised.get(a, b, e, f) * self.eps_down.get(e, f, c, d);
                }
            }
            0.5 * s
        })
    }

    /// Left dual `½ ε_ab^ef T_efcd` of an all-lower tensor.
    pub fn left_dual(&self, t: &Tensor4) -> Tensor4 {
        let raised = raise_last_pair(&self.eps_down, &self.ginv);
        Tensor4::from_fn(|a, b, c, d| {
            let mut s = 0.0;
            for e in 0..4 {
                for f in 0..4 {
                    s += raised.get(a, b, e, f) * t.get(e, f, c, d);
                }
            }
            0.5 * s
        })
    }

    /// Metric pairing `½ P^ab Q^cd g_ac g_bd` of two bivectors.
    pub fn bivector_inner(&self, p: &Matrix4<f64>, q: &Matrix4<f64>) -> f64 {
        0.5 * (self.g * p * self.g).component_mul(q).sum()
    }
}

fn raise_last_pair(t: &Tensor4, ginv: &Matrix4<f64>) -> Tensor4 {
    let once = Tensor4::from_fn(|a, b, c, f| (0..4).map(|h| ginv[(f, h)] * t.get(a, b, c, h)).sum());
    Tensor4::from_fn(|a, b, e, f| (0..4).map(|h| ginv[(e, h)] * once.get(a, b, h, f)).sum())
}

/// Build the Hodge star at a point with the orientation fixed so that
/// `*(ℓ ∧ m̃) = +ℓ ∧ m̃`.
pub fn volume_and_duals(
    g: &Matrix4<f64>,
    ginv: &Matrix4<f64>,
    l: &Vector4<f64>,
    mt: &Vector4<f64>,
    point: Point,
) -> Result<DualOperator> {
    let probe = wedge(l, mt);
    let scale = probe.amax().max(1e-300);
    let plus = DualOperator::with_sign(g, ginv, 1.0, point);
    let image = plus.star(&probe);
    if (image - probe).amax() <= 1e-9 * scale {
        Ok(plus)
    } else if (image + probe).amax() <= 1e-9 * scale {
        Ok(DualOperator::with_sign(g, ginv, -1.0, point))
    } else {
        Err(Error::Calibration(format!(
            "ℓ∧m̃ is not an eigenvector of the Hodge star at {:?} (mismatch {:e})",
            point.0,
            (image - probe).amax().min((image + probe).amax()) / scale
        )))
    }
}

/// Self-dual and anti-self-dual parts of a Weyl-like tensor.
#[derive(Debug, Clone)]
pub struct WeylSplit {
    pub plus: Tensor4,
    pub minus: Tensor4,
    /// `max |*C − C*|` relative to `max |C|`; zero for a genuine Weyl tensor.
    pub dual_mismatch: f64,
}

/// `C± = ½ (C ± C*)` using the right dual.
pub fn weyl_split(c: &Tensor4, dual: &DualOperator) -> WeylSplit {
    let right = dual.right_dual(c);
    let left = dual.left_dual(c);
    let scale = c.max_abs().max(1e-30);
    WeylSplit {
        plus: c.add(&right).scale(0.5),
        minus: c.sub(&right).scale(0.5),
        dual_mismatch: left.sub(&right).max_abs() / scale,
    }
}
