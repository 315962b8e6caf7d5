use nalgebra::Vector4;

use super::curvature::{christoffel, Connection};
use super::metric::{metric_jet, MetricSpec};
use crate::error::{Error, Result};
use crate::exprkit::{eval_jet, Expr, Jet, Point, Var};

/// `(∇_X Y)^a = X^b ∂_b Y^a + Γ^a_bc X^b Y^c` from jets of `Y` of order ≥ 1.
pub fn covariant_derivative_jets(conn: &Connection, y: &[Jet; 4], x: &Vector4<f64>) -> Vector4<f64> {
    Vector4::from_fn(|a, _| {
        let mut s = 0.0;
        for b in 0..4 {
            s += x[b] * y[a].d(Var::from_index(b));
            for c in 0..4 {
                s += conn.gamma(a, b, c) * x[b] * y[c].value();
            }
        }
        s
    })
}

/// Covariant derivative of the vector field with components `field` along `direction` at `p`.
pub fn covariant_derivative(
    spec: &MetricSpec,
    field: &[Expr; 4],
    direction: &Vector4<f64>,
    p: &Point,
) -> Result<Vector4<f64>> {
    let conn = christoffel(&metric_jet(spec, p, 1)?);
    let y = jets_of(field, p, 1)?;
    Ok(covariant_derivative_jets(&conn, &y, direction))
}

pub(crate) fn jets_of(field: &[Expr; 4], p: &Point, order: usize) -> Result<[Jet; 4]> {
    let mut out: [Jet; 4] = std::array::from_fn(|_| Jet::zero(order));
    for (slot, e) in out.iter_mut().zip(field) {
        *slot = eval_jet(e, p, order)?;
    }
    Ok(out)
}

/// Wave operator `g^ab (χ_ab − Γ^c_ab χ_c)` for any metric kind.
pub fn box_scalar(spec: &MetricSpec, chi: &Expr, p: &Point) -> Result<f64> {
    let mj = metric_jet(spec, p, 1)?;
    let conn = christoffel(&mj);
    let jchi = eval_jet(chi, p, 2)?;
    let ginv = mj.ginv_value();
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let mut mi = [0u8; 4];
            mi[a] += 1;
            mi[b] += 1;
            let mut term = jchi.partial(mi);
            for c in 0..4 {
                term -= conn.gamma(c, a, b) * jchi.d(Var::from_index(c));
            }
            s += ginv[(a, b)] * term;
        }
    }
    Ok(s)
}

/// Closed form of the wave operator on a walker metric:
///
/// ```text
/// □χ = −aχ_uu − 2cχ_uv − bχ_vv + 2χ_ux + 2χ_vy − (a_u + c_v)χ_u − (b_v + c_u)χ_v
/// ```
pub fn walker_box_closed_form(a: &Expr, b: &Expr, c: &Expr, chi: &Expr, p: &Point) -> Result<f64> {
    let (ja, jb, jc) = (eval_jet(a, p, 1)?, eval_jet(b, p, 1)?, eval_jet(c, p, 1)?);
    let x = eval_jet(chi, p, 2)?;
    let (u, v) = (Var::U, Var::V);
    Ok(-ja.value() * x.partial([2, 0, 0, 0]) - 2.0 * jc.value() * x.partial([1, 1, 0, 0])
        - jb.value() * x.partial([0, 2, 0, 0])
        + 2.0 * x.partial([1, 0, 1, 0])
        + 2.0 * x.partial([0, 1, 0, 1])
        - (ja.d(u) + jc.d(v)) * x.d(u)
        - (jb.d(v) + jc.d(u)) * x.d(v))
}

/// `walker_box_closed_form` for a walker spec.
pub fn walker_box(spec: &MetricSpec, chi: &Expr, p: &Point) -> Result<f64> {
    match spec {
        MetricSpec::Walker { a, b, c } => walker_box_closed_form(a, b, c, chi, p),
        _ => Err(Error::Kind { expected: "walker" }),
    }
}
