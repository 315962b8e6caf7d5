use nalgebra::Matrix4;

use super::metric::MetricJet;
use crate::exprkit::{Jet, Point, Var};

#[inline]
pub(crate) fn idx4(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

/// A rank-4 array of numbers, indices in coordinate order.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros() -> Tensor4 {
        Tensor4 { data: vec![0.0; 256] }
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Tensor4 {
        let mut t = Tensor4::zeros();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        t.data[idx4(a, b, c, d)] = f(a, b, c, d);
                    }
                }
            }
        }
        t
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[idx4(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        self.data[idx4(a, b, c, d)] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn sub(&self, other: &Tensor4) -> Tensor4 {
        Tensor4 { data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &Tensor4) -> Tensor4 {
        Tensor4 { data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: f64) -> Tensor4 {
        Tensor4 { data: self.data.iter().map(|a| a * k).collect() }
    }

    /// `T_abcd P^ab Q^cd`.
    pub fn pair(&self, p: &Matrix4<f64>, q: &Matrix4<f64>) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let pab = p[(a, b)];
                if pab == 0.0 {
                    continue;
                }
                for c in 0..4 {
                    for d in 0..4 {
                        s += self.get(a, b, c, d) * pab * q[(c, d)];
                    }
                }
            }
        }
        s
    }

    /// `sum |T_abcd P^ab Q^cd|` term by term; a roundoff scale for [`Tensor4::pair`].
    pub fn pair_abs(&self, p: &Matrix4<f64>, q: &Matrix4<f64>) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        s += (self.get(a, b, c, d) * p[(a, b)] * q[(c, d)]).abs();
                    }
                }
            }
        }
        s
    }

    /// Raise the first index: `g^ae T_ebcd`.
    pub fn raise_first(&self, ginv: &Matrix4<f64>) -> Tensor4 {
        Tensor4::from_fn(|a, b, c, d| (0..4).map(|e| ginv[(a, e)] * self.get(e, b, c, d)).sum())
    }
}

/// Levi-Civita connection coefficients `Γ^a_bc` as jets one order below the metric.
#[derive(Debug, Clone)]
pub struct Connection {
    pub point: Point,
    gamma: Vec<Jet>,
}

impl Connection {
    pub fn order(&self) -> usize {
        self.gamma[0].order()
    }

    pub fn gamma(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[a * 16 + b * 4 + c].value()
    }

    pub fn gamma_jet(&self, a: usize, b: usize, c: usize) -> &Jet {
        &self.gamma[a * 16 + b * 4 + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.gamma.iter().fold(0.0, |m, j| m.max(j.value().abs()))
    }
}

/// `Γ^a_bc = ½ g^ad (∂_b g_dc + ∂_c g_db − ∂_d g_bc)`.
pub fn christoffel(mj: &MetricJet) -> Connection {
    assert!(mj.order >= 1, "christoffel needs a metric jet of order at least 1");
    let k = mj.order - 1;
    // dg[e][i][j] = ∂_e g_ij
    let dg: Vec<Vec<Vec<Jet>>> = Var::ALL
        .iter()
        .map(|&v| (0..4).map(|i| (0..4).map(|j| mj.g[i][j].derivative(v)).collect()).collect())
        .collect();
    let ginv: Vec<Vec<Jet>> = (0..4).map(|i| (0..4).map(|j| mj.ginv[i][j].truncate(k)).collect()).collect();
    // lowered Γ_dbc
    let mut lower = Vec::with_capacity(64);
    for d in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                lower.push(dg[b][d][c].add(&dg[c][d][b]).sub(&dg[d][b][c]).scale(0.5));
            }
        }
    }
    let mut gamma = Vec::with_capacity(64);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                let mut acc = Jet::zero(k);
                for d in 0..4 {
                    acc = acc.add(&ginv[a][d].mul(&lower[d * 16 + b * 4 + c]));
                }
                gamma.push(acc);
            }
        }
    }
    Connection { point: mj.point, gamma }
}

/// Riemann, Ricci, scalar, trace-free Ricci and Weyl tensors as jets two orders
/// below the metric. Conventions:
///
/// ```text
/// R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
/// R_bd    = R^a_bad,   S = g^bd R_bd,   E = R_ab − (S/4) g_ab
/// C       = R − ½ E⊙g − (S/24) g⊙g
/// ```
///
/// with `(h⊙k)_abcd = h_ac k_bd + h_bd k_ac − h_ad k_bc − h_bc k_ad`.
#[derive(Debug, Clone)]
pub struct CurvaturePack {
    pub point: Point,
    pub connection: Connection,
    g: [[Jet; 4]; 4],
    riemann: Vec<Jet>,
    ricci: Vec<Jet>,
    scalar: Jet,
    tf_ricci: Vec<Jet>,
    weyl: Vec<Jet>,
    g_value: Matrix4<f64>,
    ginv_value: Matrix4<f64>,
}

pub fn curvature(mj: &MetricJet) -> CurvaturePack {
    assert!(mj.order >= 2, "curvature needs a metric jet of order at least 2");
    let k = mj.order - 2;
    let conn = christoffel(mj);
    let gam: Vec<Jet> = conn.gamma.iter().map(|j| j.truncate(k)).collect();
    let dgam: Vec<Vec<Jet>> = Var::ALL.iter().map(|&v| conn.gamma.iter().map(|j| j.derivative(v)).collect()).collect();
    let gi = |a: usize, b: usize, c: usize| a * 16 + b * 4 + c;

    // R^a_bcd
    let mut r_up = Vec::with_capacity(256);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = dgam[c][gi(a, d, b)].sub(&dgam[d][gi(a, c, b)]);
                    for e in 0..4 {
                        acc = acc.add(&gam[gi(a, c, e)].mul(&gam[gi(e, d, b)]));
                        acc = acc.sub(&gam[gi(a, d, e)].mul(&gam[gi(e, c, b)]));
                    }
                    r_up.push(acc);
                }
            }
        }
    }
    let g: [[Jet; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| mj.g[i][j].truncate(k)));
    let ginv: [[Jet; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| mj.ginv[i][j].truncate(k)));

    let mut riemann = Vec::with_capacity(256);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = Jet::zero(k);
                    for e in 0..4 {
                        acc = acc.add(&g[a][e].mul(&r_up[idx4(e, b, c, d)]));
                    }
                    riemann.push(acc);
                }
            }
        }
    }
    let mut ricci = Vec::with_capacity(16);
    for b in 0..4 {
        for d in 0..4 {
            let mut acc = Jet::zero(k);
            for a in 0..4 {
                acc = acc.add(&r_up[idx4(a, b, a, d)]);
            }
            ricci.push(acc);
        }
    }
    let mut scalar = Jet::zero(k);
    for b in 0..4 {
        for d in 0..4 {
            scalar = scalar.add(&ginv[b][d].mul(&ricci[b * 4 + d]));
        }
    }
    let mut tf_ricci = Vec::with_capacity(16);
    for a in 0..4 {
        for b in 0..4 {
            tf_ricci.push(ricci[a * 4 + b].sub(&g[a][b].mul(&scalar).scale(0.25)));
        }
    }
    let kn = |h: &dyn Fn(usize, usize) -> Jet, q: &dyn Fn(usize, usize) -> Jet, a, b, c, d| -> Jet {
        h(a, c).mul(&q(b, d)).add(&h(b, d).mul(&q(a, c))).sub(&h(a, d).mul(&q(b, c))).sub(&h(b, c).mul(&q(a, d)))
    };
    let gf = |i: usize, j: usize| g[i][j].clone();
    let ef = |i: usize, j: usize| tf_ricci[i * 4 + j].clone();
    let mut weyl = Vec::with_capacity(256);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let eg = kn(&ef, &gf, a, b, c, d);
                    let gg = kn(&gf, &gf, a, b, c, d);
                    weyl.push(riemann[idx4(a, b, c, d)].sub(&eg.scale(0.5)).sub(&gg.mul(&scalar).scale(1.0 / 24.0)));
                }
            }
        }
    }
    CurvaturePack {
        point: mj.point,
        connection: conn,
        g_value: mj.g_value(),
        ginv_value: mj.ginv_value(),
        g,
        riemann,
        ricci,
        scalar,
        tf_ricci,
        weyl,
    }
}

fn values4(jets: &[Jet]) -> Tensor4 {
    Tensor4 { data: jets.iter().map(Jet::value).collect() }
}

fn values2(jets: &[Jet]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| jets[i * 4 + j].value())
}

impl CurvaturePack {
    /// Jet order of the stored curvature (metric order minus two).
    pub fn order(&self) -> usize {
        self.scalar.order()
    }

    pub fn g(&self) -> Matrix4<f64> {
        self.g_value
    }

    pub fn ginv(&self) -> Matrix4<f64> {
        self.ginv_value
    }

    pub fn g_jet(&self, a: usize, b: usize) -> &Jet {
        &self.g[a][b]
    }

    pub fn riemann(&self) -> Tensor4 {
        values4(&self.riemann)
    }

    pub fn weyl(&self) -> Tensor4 {
        values4(&self.weyl)
    }

    pub fn weyl_jet(&self, a: usize, b: usize, c: usize, d: usize) -> &Jet {
        &self.weyl[idx4(a, b, c, d)]
    }

    /// `∂_var C_abcd`, available when the metric jet had order at least 3.
    pub fn weyl_partial(&self, var: Var) -> Option<Tensor4> {
        (self.order() >= 1).then(|| Tensor4 { data: self.weyl.iter().map(|j| j.d(var)).collect() })
    }

    pub fn ricci(&self) -> Matrix4<f64> {
        values2(&self.ricci)
    }

    pub fn scalar(&self) -> f64 {
        self.scalar.value()
    }

    pub fn scalar_jet(&self) -> &Jet {
        &self.scalar
    }

    pub fn trace_free_ricci(&self) -> Matrix4<f64> {
        values2(&self.tf_ricci)
    }

    /// Largest Riemann component; the reference scale for curvature tolerances.
    pub fn scale(&self) -> f64 {
        self.riemann.iter().fold(0.0, |m, j| m.max(j.value().abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::{parse_expr, Expr};
    use crate::tensor::{metric_jet, MetricSpec};

    fn pack(a: &str, b: &str, c: &str, p: [f64; 4]) -> CurvaturePack {
        let spec = MetricSpec::parse_walker(a, b, c).unwrap();
        curvature(&metric_jet(&spec, &Point(p), 3).unwrap())
    }

    #[test]
    fn flat_walker_has_no_curvature() {
        let k = pack("0", "0", "0", [0.3, 0.4, 0.5, 0.6]);
        assert_eq!(k.riemann().max_abs(), 0.0);
        assert_eq!(k.connection.max_abs(), 0.0);
    }

    #[test]
    fn scalar_curvature_of_quadratic_walker() {
        let k = pack("u^2", "v^2", "0", [0.9, 1.2, 0.1, -0.4]);
        assert!((k.scalar() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gamma_vv_vanishes() {
        let spec = MetricSpec::walker(parse_expr("u^2").unwrap(), Expr::zero(), Expr::zero());
        let conn = christoffel(&metric_jet(&spec, &Point::new(1.2, 0.7, 0.3, 0.1), 2).unwrap());
        for a in 0..4 {
            assert_eq!(conn.gamma(a, 1, 1), 0.0);
        }
    }
}
