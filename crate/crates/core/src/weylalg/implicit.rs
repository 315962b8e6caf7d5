use super::quartic::{weyl_quartic_jets, Side};
use crate::error::{Error, Result};
use crate::exprkit::{Jet, Point, Var};
use crate::frames::Tetrad;
use crate::tensor::CurvaturePack;

/// `k!/(k−j)!`
fn falling(k: usize, j: usize) -> f64 {
    (0..j).map(|i| (k - i) as f64).product()
}

/// First coordinate partials of a root field of the quartic, by implicit differentiation of
/// `∂^(m−1) q / ∂τ^(m−1) = 0` where `m` is the multiplicity at `p`.
///
/// `root` is the affine value `τ = t1/t0`; `None` stands for the root `(0:1)`, in which case the
/// returned partials are those of `t0/t1`. `curv` must carry first derivatives (metric order ≥ 3).
pub fn implicit_root_jet(curv: &CurvaturePack, tet: &Tetrad, side: Side, root: Option<f64>, p: &Point) -> Result<[f64; 4]> {
    if curv.order() < 1 {
        return Err(Error::Config("implicit root derivatives need a curvature pack of order ≥ 1".into()));
    }
    let mut c: Vec<Jet> = weyl_quartic_jets(curv, tet, side, p)?.to_vec();
    let tau = match root {
        Some(t) => t,
        None => {
            c.reverse();
            0.0
        }
    };
    let reference = c.iter().map(|j| j.max_abs()).fold(0.0, f64::max).max(1e-300);
    let scale_t = tau.abs().max(1.0);
    let deriv = |j: usize, f: &dyn Fn(&Jet) -> f64| -> f64 {
        (j..5).map(|k| f(&c[k]) * falling(k, j) * tau.powi((k - j) as i32)).sum()
    };
    let size = |j: usize| -> f64 { (j..5).map(|k| falling(k, j) * scale_t.powi((k - j) as i32)).sum::<f64>() * reference };
    let mut m = None;
    for j in 0..5 {
        let dj = deriv(j, &|x: &Jet| x.value());
        if dj.abs() > 1e-7 * size(j) {
            m = Some(j);
            break;
        }
    }
    let m = match m {
        Some(0) => {
            return Err(Error::DegenerateRoot { point: p.0, detail: format!("τ = {tau} is not a root") });
        }
        Some(m) => m,
        None => return Err(Error::DegenerateRoot { point: p.0, detail: "quartic vanishes identically".into() }),
    };
    let dt_g = deriv(m, &|x: &Jet| x.value());
    if dt_g.abs() < 1e-4 * size(m) {
        return Err(Error::DegenerateRoot {
            point: p.0,
            detail: format!("multiplicity {m} is nearly degenerate"),
        });
    }
    Ok(Var::ALL.map(|v| -deriv(m - 1, &|x: &Jet| x.d(v)) / dt_g))
}
