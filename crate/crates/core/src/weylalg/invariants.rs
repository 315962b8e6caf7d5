use nalgebra::{Matrix2, Vector4};

use super::quartic::{weyl_quartic, QuarticForm, Side};
use crate::error::{Error, Result};
use crate::exprkit::Point;
use crate::frames::{walker_tetrad, Distribution, ProjParam};
use crate::tensor::{curvature, metric_jet, CurvaturePack, MetricSpec};

fn riemann_scale(curv: &CurvaturePack) -> f64 {
    curv.scale().max(1e-30)
}

/// `max |E_ab|` relative to the largest Riemann component.
pub fn einstein_residual(curv: &CurvaturePack) -> f64 {
    curv.trace_free_ricci().amax() / riemann_scale(curv)
}

/// `max |E(X, ∂_b)|` over a Euclidean-orthonormal basis `X` of `Z` and coordinate directions,
/// relative to the largest Riemann component. Vanishes when `E` annihilates `Z`.
pub fn ricci_null_residual(curv: &CurvaturePack, z: &Distribution, p: &Point) -> Result<f64> {
    let basis = orthonormal(z, p)?;
    let e = curv.trace_free_ricci();
    let worst = basis.iter().map(|x| (e * x).amax()).fold(0.0, f64::max);
    Ok(worst / riemann_scale(curv))
}

/// Determinant of `E` restricted to `Z` (orthonormal basis), relative to the squared Riemann scale.
/// A null direction of `E` inside `Z` exists when this is `≤ 0`.
pub fn rps_discriminant(curv: &CurvaturePack, z: &Distribution, p: &Point) -> Result<f64> {
    let basis = orthonormal(z, p)?;
    if basis.len() != 2 {
        return Err(Error::RankDeficient { label: z.label.clone(), point: p.0 });
    }
    let e = curv.trace_free_ricci();
    let m = Matrix2::from_fn(|i, j| basis[i].dot(&(e * basis[j])));
    Ok(m.determinant() / riemann_scale(curv).powi(2))
}

fn orthonormal(d: &Distribution, p: &Point) -> Result<Vec<Vector4<f64>>> {
    let vs = d.values(p)?;
    let mut out: Vec<Vector4<f64>> = Vec::new();
    for v in vs {
        let mut w = v;
        for q in &out {
            w -= q * q.dot(&w);
        }
        let n = w.norm();
        if n <= 1e-10 * v.norm().max(1e-300) {
            return Err(Error::RankDeficient { label: d.label.clone(), point: p.0 });
        }
        out.push(w / n);
    }
    Ok(out)
}

/// `Ψ₂ − S/12` with `Ψ₂` read from the ASD quartic in a frame adapted to the direction `λ`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Obstruction {
    pub psi2: f64,
    pub s_over_12: f64,
    pub value: f64,
    /// Reference magnitude used for [`Obstruction::relative`].
    pub scale: f64,
}

impl Obstruction {
    pub fn relative(&self) -> f64 {
        self.value.abs() / self.scale
    }
}

/// Obstruction from an already computed ASD quartic and curvature pack.
///
/// The quartic is rewritten in variables where `λ = (l0 : l1)` sits at `(0:1)` with a
/// unimodular change of frame, and `Ψ₂ = c₂ / (6κ)` is read there. For `λ = (0:1)` this is
/// the plain middle coefficient.
pub fn obstruction_from(asd: &QuarticForm, curv: &CurvaturePack, kappa: f64, l0: f64, l1: f64) -> Obstruction {
    debug_assert_eq!(asd.side, Side::ASD);
    let q = asd.adapted(l0, l1);
    let psi2 = q.coeffs[2] / (6.0 * kappa);
    let s12 = curv.scalar() / 12.0;
    let scale = psi2
        .abs()
        .max(s12.abs())
        .max(q.reference() / (6.0 * kappa.abs()))
        .max(curv.scale() / 12.0)
        .max(1e-30);
    Obstruction { psi2, s_over_12: s12, value: psi2 - s12, scale }
}

/// `Ψ₂ − S/12` for a walker metric at `p`, using the direction field `t` (`(0:1)` in Walker gauge).
pub fn obstruction_residual(spec: &MetricSpec, p: &Point, kappa: f64, t: &ProjParam) -> Result<Obstruction> {
    if spec.walker_parts().is_none() {
        return Err(Error::Kind { expected: "walker or conformal_walker" });
    }
    let curv = curvature(&metric_jet(spec, p, 2)?);
    let tet = walker_tetrad(spec)?.at(p)?;
    let asd = weyl_quartic(&curv, &tet, Side::ASD);
    let (l0, l1) = t.at(p)?;
    Ok(obstruction_from(&asd, &curv, kappa, l0, l1))
}
