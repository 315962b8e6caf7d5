use nalgebra::{DMatrix, Matrix4, Vector4};

use super::field::{lie_bracket, VectorField};
use super::tetrad::Tetrad;
use crate::error::{Error, Result};
use crate::exprkit::{eval, parse_expr, Expr, Jet, Point};
use crate::tensor::{christoffel, covariant_derivative_jets, metric_jet, Connection, MetricSpec};

/// Homogeneous pair `(t0 : t1)` of functions selecting one plane of a family.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjParam {
    pub t0: Expr,
    pub t1: Expr,
}

impl ProjParam {
    pub fn new(t0: Expr, t1: Expr) -> ProjParam {
        ProjParam { t0, t1 }
    }

    /// Constant direction `(t0 : t1)`.
    pub fn fixed(t0: f64, t1: f64) -> ProjParam {
        ProjParam { t0: Expr::Const(t0), t1: Expr::Const(t1) }
    }

    pub fn parse(t0: &str, t1: &str) -> Result<ProjParam> {
        Ok(ProjParam { t0: parse_expr(t0)?, t1: parse_expr(t1)? })
    }

    /// Same direction with both entries multiplied by `sigma`.
    pub fn scaled(&self, sigma: &Expr) -> ProjParam {
        ProjParam { t0: Expr::mul(sigma.clone(), self.t0.clone()), t1: Expr::mul(sigma.clone(), self.t1.clone()) }
    }

    pub fn at(&self, p: &Point) -> Result<(f64, f64)> {
        let (a, b) = (eval(&self.t0, p)?, eval(&self.t1, p)?);
        if a.abs().max(b.abs()) < 1e-12 {
            return Err(Error::DegenerateParam { point: p.0 });
        }
        Ok((a, b))
    }

    /// Normalized `t1/t0` at `p` as an affine coordinate, `None` at infinity.
    pub fn affine_at(&self, p: &Point) -> Result<Option<f64>> {
        let (a, b) = self.at(p)?;
        Ok((a.abs() > 1e-14 * b.abs()).then(|| b / a))
    }
}

/// A distribution spanned by one to three vector fields.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub label: String,
    pub gens: Vec<VectorField>,
}

impl Distribution {
    pub fn new(label: impl Into<String>, gens: Vec<VectorField>) -> Distribution {
        assert!((1..=3).contains(&gens.len()), "a distribution has 1 to 3 generators");
        Distribution { label: label.into(), gens }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn values(&self, p: &Point) -> Result<Vec<Vector4<f64>>> {
        self.gens.iter().map(|g| g.at(p)).collect()
    }

    fn jets(&self, p: &Point) -> Result<Vec<[Jet; 4]>> {
        self.gens.iter().map(|g| g.jets(p, 1)).collect()
    }

    /// Orthonormal basis of the span at `p` plus the change of basis `R⁻¹`.
    pub(crate) fn frame(&self, p: &Point) -> Result<SpanFrame> {
        SpanFrame::new(&self.values(p)?, &self.label, p)
    }
}

/// Euclidean-orthonormal basis `Q` of a span with `X = Q R`.
pub(crate) struct SpanFrame {
    q: DMatrix<f64>,
    r_inv: DMatrix<f64>,
}

impl SpanFrame {
    pub(crate) fn new(vs: &[Vector4<f64>], label: &str, p: &Point) -> Result<SpanFrame> {
        let k = vs.len();
        let x = DMatrix::from_fn(4, k, |i, j| vs[j][i]);
        let qr = x.qr();
        let r = qr.r();
        let diag_max = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
        let diag_min = (0..k).map(|i| r[(i, i)].abs()).fold(f64::INFINITY, f64::min);
        if !(diag_min > 1e-10 * diag_max) {
            return Err(Error::RankDeficient { label: label.to_string(), point: p.0 });
        }
        let r_inv = r.try_inverse().ok_or_else(|| Error::RankDeficient { label: label.to_string(), point: p.0 })?;
        Ok(SpanFrame { q: qr.q(), r_inv })
    }

    pub(crate) fn off_span(&self, w: &Vector4<f64>) -> Vector4<f64> {
        let w = DMatrix::from_column_slice(4, 1, w.as_slice());
        let proj = &self.q * (self.q.transpose() * &w);
        let d = w - proj;
        Vector4::new(d[0], d[1], d[2], d[3])
    }

    /// Frobenius norm of a form `vals[i][j]` after moving its second index, and the
    /// first one too when `transform_first`, from the generators to the orthonormal basis.
    fn transformed_norm(&self, vals: &[Vec<Vector4<f64>>], transform_first: bool) -> f64 {
        let k = self.r_inv.nrows();
        let rows = vals.len();
        let cols = vals[0].len();
        let mut total = 0.0;
        let first_range = if transform_first { k } else { rows };
        for kk in 0..first_range {
            for ll in 0..k {
                let mut acc = Vector4::zeros();
                for i in 0..rows {
                    let wi = if transform_first { self.r_inv[(i, kk)] } else if i == kk { 1.0 } else { 0.0 };
                    if wi == 0.0 {
                        continue;
                    }
                    for j in 0..cols {
                        acc += vals[i][j] * (wi * self.r_inv[(j, ll)]);
                    }
                }
                total += acc.norm_squared();
            }
        }
        total.sqrt()
    }
}

/// `α(s) = span{s0 ℓ + s1 m, s0 m̃ + s1 n}`.
pub fn alpha_dist(s: &ProjParam, tet: &Tetrad) -> Distribution {
    Distribution::new(
        "alpha",
        vec![
            VectorField::combine(&s.t0, &tet.l, &s.t1, &tet.m),
            VectorField::combine(&s.t0, &tet.mt, &s.t1, &tet.n),
        ],
    )
}

/// `β(t) = span{t0 ℓ + t1 m̃, t0 m + t1 n}`.
pub fn beta_dist(t: &ProjParam, tet: &Tetrad) -> Distribution {
    Distribution::new(
        "beta",
        vec![
            VectorField::combine(&t.t0, &tet.l, &t.t1, &tet.mt),
            VectorField::combine(&t.t0, &tet.m, &t.t1, &tet.n),
        ],
    )
}

/// The walker plane `Z = α(1:0) = span{ℓ, m̃}`.
pub fn dist_z(tet: &Tetrad) -> Distribution {
    let mut d = alpha_dist(&ProjParam::fixed(1.0, 0.0), tet);
    d.label = "Z".into();
    d
}

/// `D = span{t0 ℓ + t1 m̃} = Z ∩ β(t)`.
pub fn dist_d(t: &ProjParam, tet: &Tetrad) -> Distribution {
    Distribution::new("D", vec![VectorField::combine(&t.t0, &tet.l, &t.t1, &tet.mt)])
}

/// `H = D^⊥ = span{ℓ, m̃, t0 m + t1 n}`.
pub fn dist_h(t: &ProjParam, tet: &Tetrad) -> Distribution {
    Distribution::new(
        "H",
        vec![tet.l.clone(), tet.mt.clone(), VectorField::combine(&t.t0, &tet.m, &t.t1, &tet.n)],
    )
}

/// Norm of the off-span part of all brackets `[X_i, X_j]`, measured in a
/// Euclidean-orthonormal basis of the span. Zero exactly when the span is involutive at `p`.
pub fn frobenius_residual(d: &Distribution, p: &Point) -> Result<f64> {
    let frame = d.frame(p)?;
    let jets = d.jets(p)?;
    let k = jets.len();
    let vals: Vec<Vec<Vector4<f64>>> =
        (0..k).map(|i| (0..k).map(|j| frame.off_span(&lie_bracket(&jets[i], &jets[j]))).collect()).collect();
    // each unordered pair appears twice with opposite signs
    Ok(frame.transformed_norm(&vals, true) / std::f64::consts::SQRT_2)
}

fn connection_scale(conn: &Connection) -> f64 {
    conn.max_abs().max(1.0)
}

/// Off-span part of `∇_{X_i} X_j` over all generator pairs, divided by `max(1, max|Γ|)`.
pub fn autoparallel_residual_with(conn: &Connection, d: &Distribution, p: &Point) -> Result<f64> {
    let frame = d.frame(p)?;
    let jets = d.jets(p)?;
    let xs = d.values(p)?;
    let k = jets.len();
    let vals: Vec<Vec<Vector4<f64>>> = (0..k)
        .map(|i| (0..k).map(|j| frame.off_span(&covariant_derivative_jets(conn, &jets[j], &xs[i]))).collect())
        .collect();
    Ok(frame.transformed_norm(&vals, true) / connection_scale(conn))
}

/// Off-span part of `∇_{e_b} X_j` over coordinate directions and generators, divided by `max(1, max|Γ|)`.
pub fn parallel_residual_with(conn: &Connection, d: &Distribution, p: &Point) -> Result<f64> {
    let frame = d.frame(p)?;
    let jets = d.jets(p)?;
    let vals: Vec<Vec<Vector4<f64>>> = (0..4)
        .map(|b| {
            let e = Vector4::from_fn(|i, _| if i == b { 1.0 } else { 0.0 });
            jets.iter().map(|y| frame.off_span(&covariant_derivative_jets(conn, y, &e))).collect()
        })
        .collect();
    Ok(frame.transformed_norm(&vals, false) / connection_scale(conn))
}

pub fn autoparallel_residual(spec: &MetricSpec, d: &Distribution, p: &Point) -> Result<f64> {
    autoparallel_residual_with(&christoffel(&metric_jet(spec, p, 1)?), d, p)
}

pub fn parallel_residual(spec: &MetricSpec, d: &Distribution, p: &Point) -> Result<f64> {
    parallel_residual_with(&christoffel(&metric_jet(spec, p, 1)?), d, p)
}

/// Largest metric pairing between orthonormalized generators, relative to `max |g|`.
pub fn null_residual(g: &Matrix4<f64>, d: &Distribution, p: &Point) -> Result<f64> {
    let frame = d.frame(p)?;
    let k = d.rank();
    let q = &frame.q;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in i..k {
            let qi = Vector4::from_fn(|r, _| q[(r, i)]);
            let qj = Vector4::from_fn(|r, _| q[(r, j)]);
            worst = worst.max(qi.dot(&(g * qj)).abs());
        }
    }
    Ok(worst / g.amax().max(1e-30))
}

/// Largest off-span component of either span's orthonormal basis relative to the other;
/// zero when the spans coincide. Differing ranks give 1.
pub fn span_distance(d1: &Distribution, d2: &Distribution, p: &Point) -> Result<f64> {
    if d1.rank() != d2.rank() {
        return Ok(1.0);
    }
    let f1 = d1.frame(p)?;
    let f2 = d2.frame(p)?;
    let mut worst = 0.0f64;
    for (a, b) in [(&f1, &f2), (&f2, &f1)] {
        for j in 0..a.q.ncols() {
            let col = Vector4::from_fn(|r, _| a.q[(r, j)]);
            worst = worst.max(b.off_span(&col).norm());
        }
    }
    Ok(worst)
}

/// Distance of a single vector from the span of `d` (after normalizing the vector).
pub fn off_span_norm(d: &Distribution, w: &Vector4<f64>, p: &Point) -> Result<f64> {
    let frame = d.frame(p)?;
    Ok(frame.off_span(w).norm() / w.norm().max(1e-300))
}

