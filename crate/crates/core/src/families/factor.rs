use super::instance::{FamilyInstance, Tag};
use crate::error::{Error, Result};
use crate::exprkit::{antideriv_poly, depends_on, diff_expr, is_zero, sample_unit_box, simplify, Expr, Func, Var};
use crate::frames::{beta_dist, dist_z, parallel_residual, walker_tetrad, ProjParam};
use crate::tensor::MetricSpec;

const CHECK_SEED: u64 = 0xfac7;
const CHECK_POINTS: usize = 6;
const CHECK_TOL: f64 = 1e-7;

/// A conformal factor `χ` such that `χ² g` is two-sided Walker.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSidedFactor {
    pub chi: Expr,
    /// `f = −½ ∫ c_v dx`.
    pub f: Expr,
    /// `−1` when `χ = exp(−f)`, `+1` when the opposite sign was needed.
    pub exponent_sign: i8,
    /// Largest parallel residual of `Z` and of `W(0:1)` for `χ² g` over the check points.
    pub z_parallel: f64,
    pub w_parallel: f64,
}

impl TwoSidedFactor {
    /// The rescaled metric as a family instance.
    pub fn apply(&self, inst: &FamilyInstance) -> Result<FamilyInstance> {
        let (a, b, c) = inst.spec.walker_parts().ok_or(Error::Kind { expected: "walker" })?;
        let spec = MetricSpec::conformal_walker(self.chi.clone(), a.clone(), b.clone(), c.clone());
        let mut out = FamilyInstance::new(spec, "conformal_two_sided", &[Tag::Walker, Tag::Sesqui, Tag::TwoSided]);
        out.exclude = inst.exclude.clone();
        out.provenance.coefficients = inst.provenance.coefficients.clone();
        out.provenance.coefficients.push(("chi".into(), self.chi.clone()));
        out.provenance.notes.push(format!("conformal exponent sign {:+}", self.exponent_sign));
        Ok(out)
    }
}

fn parallel_check(spec: &MetricSpec) -> Result<(f64, f64)> {
    let tet = walker_tetrad(spec)?;
    let z = dist_z(&tet);
    let w = beta_dist(&ProjParam::fixed(0.0, 1.0), &tet);
    let mut worst = (0.0f64, 0.0f64);
    for p in sample_unit_box(CHECK_SEED, CHECK_POINTS) {
        worst.0 = worst.0.max(parallel_residual(spec, &z, &p)?);
        worst.1 = worst.1.max(parallel_residual(spec, &w, &p)?);
    }
    Ok(worst)
}

/// Conformal factor turning a sesqui-Walker metric with `c_uv ≡ 0` into a two-sided one.
///
/// Both signs of the exponent are tried against the parallel residuals of the
/// rescaled metric; the one that works is reported in `exponent_sign`.
pub fn conformal_two_sided_factor(inst: &FamilyInstance) -> Result<TwoSidedFactor> {
    let (a, b, c) = match &inst.spec {
        MetricSpec::Walker { a, b, c } => (a, b, c),
        _ => return Err(Error::Kind { expected: "walker" }),
    };
    let a_v = simplify(&diff_expr(a, Var::V));
    if !is_zero(&a_v) {
        return Err(Error::ConstraintViolated(format!("a_v = {a_v} does not vanish")));
    }
    let c_v = simplify(&diff_expr(c, Var::V));
    let c_vv = simplify(&diff_expr(&c_v, Var::V));
    if !is_zero(&c_vv) {
        return Err(Error::NotMultipleWps(format!("c_vv = {c_vv}")));
    }
    let c_uv = simplify(&diff_expr(&c_v, Var::U));
    if !is_zero(&c_uv) {
        return Err(Error::ObstructionPresent(format!("c_uv = {c_uv}")));
    }
    debug_assert!(!depends_on(&c_v, Var::U) && !depends_on(&c_v, Var::V));

    let f = simplify(&Expr::scale(-0.5, antideriv_poly(&c_v, Var::X)?));
    if is_zero(&f) {
        let spec = MetricSpec::walker(a.clone(), b.clone(), c.clone());
        let (z_parallel, w_parallel) = parallel_check(&spec)?;
        return Ok(TwoSidedFactor { chi: Expr::one(), f, exponent_sign: -1, z_parallel, w_parallel });
    }
    let mut tried = Vec::new();
    for sign in [-1i8, 1] {
        let chi = Expr::call(Func::Exp, Expr::scale(sign as f64, f.clone()));
        let spec = MetricSpec::conformal_walker(chi.clone(), a.clone(), b.clone(), c.clone());
        let (z_parallel, w_parallel) = parallel_check(&spec)?;
        if z_parallel <= CHECK_TOL && w_parallel <= CHECK_TOL {
            return Ok(TwoSidedFactor { chi, f, exponent_sign: sign, z_parallel, w_parallel });
        }
        tried.push(format!("exp({sign:+}f): Z {z_parallel:.2e}, W {w_parallel:.2e}"));
    }
    Err(Error::ConstraintViolated(format!(
        "no sign of the exponent makes the rescaled metric two-sided ({})",
        tried.join("; ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::parse_expr;
    use crate::families::mk_walker;

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn factor_for_linear_c_v() {
        let inst = mk_walker(p("u^2"), p("v^2 + x*y"), p("v*x"));
        let k = conformal_two_sided_factor(&inst).unwrap();
        assert!(is_zero(&Expr::sub(k.f.clone(), p("-x^2/4"))));
        assert!(k.z_parallel < 1e-7 && k.w_parallel < 1e-7);
        assert!(k.apply(&inst).unwrap().has(Tag::TwoSided));
    }

    #[test]
    fn trivial_and_failing_inputs() {
        let k = conformal_two_sided_factor(&mk_walker(p("u^2"), p("v^2"), p("u"))).unwrap();
        assert_eq!(k.chi, Expr::one());
        assert!(matches!(
            conformal_two_sided_factor(&mk_walker(p("u^2"), p("v^2"), p("u*v"))),
            Err(Error::ObstructionPresent(_))
        ));
        assert!(matches!(
            conformal_two_sided_factor(&mk_walker(p("u^2"), p("v^2"), p("v^2"))),
            Err(Error::NotMultipleWps(_))
        ));
    }
}
