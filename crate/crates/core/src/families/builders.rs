//! Family builders. Every builder writes the metric as the matrix entries
//! `a, b, c` of the Walker block; line-element coefficients of `dx dy` are
//! halved here and nowhere else.

use super::instance::{Exclusion, FamilyInstance, Tag};
use crate::error::{Error, Result};
use crate::exprkit::{depends_on, diff_expr, is_zero, simplify, Expr, Func, Var};
use crate::frames::ProjParam;
use crate::tensor::MetricSpec;

/// Coefficient names accepted by [`mk_sd2015`], in argument order.
pub const SD2015_NAMES: [&str; 15] = ["A", "B", "C", "D", "E", "F", "G", "H", "K", "L", "M", "N", "P", "Q", "T"];

/// Coefficient names accepted by [`mk_sd_two_sided`], in argument order.
pub const SD_TWO_SIDED_NAMES: [&str; 9] = ["C", "E", "G", "L", "M", "N", "H", "P", "T"];

fn u() -> Expr {
    Expr::var(Var::U)
}

fn v() -> Expr {
    Expr::var(Var::V)
}

/// `k · coef · u^i v^j`
fn term(k: f64, coef: &Expr, i: i32, j: i32) -> Expr {
    Expr::scale(k, Expr::mul(coef.clone(), Expr::mul(Expr::pow(u(), i), Expr::pow(v(), j))))
}

fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
    terms.into_iter().fold(Expr::zero(), Expr::add)
}

fn d(e: &Expr, var: Var) -> Expr {
    simplify(&diff_expr(e, var))
}

fn v_free(e: &Expr) -> bool {
    is_zero(&diff_expr(e, Var::V))
}

fn require_xy(name: &str, e: &Expr) -> Result<()> {
    if depends_on(e, Var::U) || depends_on(e, Var::V) {
        return Err(Error::CoefficientDependsOnUV { name: name.to_string() });
    }
    Ok(())
}

fn named(names: &[&str], coeffs: &[Expr]) -> Vec<(String, Expr)> {
    names.iter().zip(coeffs).map(|(n, e)| (n.to_string(), e.clone())).collect()
}

/// Plain Walker metric. Adds `SESQUI` when `a_v ≡ 0` and `TWO_SIDED` when also `c_v ≡ 0`.
pub fn mk_walker(a: Expr, b: Expr, c: Expr) -> FamilyInstance {
    let sesqui = v_free(&a);
    let two_sided = sesqui && v_free(&c);
    let coeffs = named(&["a", "b", "c"], &[a.clone(), b.clone(), c.clone()]);
    let mut inst = FamilyInstance::new(MetricSpec::walker(a, b, c), "walker", &[Tag::Walker]);
    if sesqui {
        inst.tag(Tag::Sesqui);
    }
    if two_sided {
        inst.tag(Tag::TwoSided);
    }
    inst.provenance.coefficients = coeffs;
    inst
}

/// The self-dual Walker family, fifteen functions of `(x, y)` in [`SD2015_NAMES`] order.
pub fn mk_sd2015(k: [Expr; 15]) -> Result<FamilyInstance> {
    for (name, e) in SD2015_NAMES.iter().zip(&k) {
        require_xy(name, e)?;
    }
    let [ca, cb, cc, cd, ce, cf, cg, ch, ck, cl, cm, cn, cp, cq, ct] = &k;
    let a = sum([
        term(1.0, ca, 3, 0),
        term(1.0, cb, 2, 1),
        term(1.0, cc, 2, 0),
        term(2.0, cd, 1, 1),
        term(1.0, ce, 1, 0),
        term(1.0, cf, 0, 1),
        term(1.0, cg, 0, 0),
    ]);
    let b = sum([
        term(1.0, cb, 0, 3),
        term(1.0, ca, 1, 2),
        term(1.0, ck, 0, 2),
        term(2.0, cl, 1, 1),
        term(1.0, cm, 1, 0),
        term(1.0, cn, 0, 1),
        term(1.0, ch, 0, 0),
    ]);
    let half_ck = Expr::scale(0.5, Expr::add(cc.clone(), ck.clone()));
    let c = sum([
        term(1.0, ca, 2, 1),
        term(1.0, cb, 1, 2),
        term(1.0, cl, 2, 0),
        term(1.0, cd, 0, 2),
        term(1.0, &half_ck, 1, 1),
        term(1.0, cp, 1, 0),
        term(1.0, cq, 0, 1),
        term(1.0, ct, 0, 0),
    ]);
    let mut inst = mk_walker(a, b, c);
    inst.tag(Tag::Sd);
    inst.provenance.family = "sd2015".into();
    inst.provenance.coefficients = named(&SD2015_NAMES, &k);
    Ok(inst)
}

/// The two-sided self-dual subfamily, nine functions of `(x, y)` in [`SD_TWO_SIDED_NAMES`] order.
/// Its scalar curvature vanishes identically.
pub fn mk_sd_two_sided(k: [Expr; 9]) -> Result<FamilyInstance> {
    for (name, e) in SD_TWO_SIDED_NAMES.iter().zip(&k) {
        require_xy(name, e)?;
    }
    let [cc, ce, cg, cl, cm, cn, ch, cp, ct] = &k;
    let a = sum([term(1.0, cc, 2, 0), term(1.0, ce, 1, 0), term(1.0, cg, 0, 0)]);
    let b = sum([
        term(-1.0, cc, 0, 2),
        term(2.0, cl, 1, 1),
        term(1.0, cm, 1, 0),
        term(1.0, cn, 0, 1),
        term(1.0, ch, 0, 0),
    ]);
    let c = sum([term(1.0, cl, 2, 0), term(1.0, cp, 1, 0), term(1.0, ct, 0, 0)]);
    let mut inst = mk_walker(a, b, c);
    inst.tag(Tag::Sd);
    inst.provenance.family = "sd_two_sided".into();
    inst.provenance.coefficients = named(&SD_TWO_SIDED_NAMES, &k);
    inst.provenance.expected.push(("S".into(), Expr::zero()));
    Ok(inst)
}

/// Two-sided Walker metric; `a` and `c` must not depend on `v`.
pub fn mk_two_sided(a: Expr, b: Expr, c: Expr) -> Result<FamilyInstance> {
    for (name, e) in [("a", &a), ("c", &c)] {
        if !v_free(e) {
            return Err(Error::ConstraintViolated(format!(
                "{name} depends on v ({name}_v = {})",
                d(e, Var::V)
            )));
        }
    }
    let mut inst = mk_walker(a, b, c);
    inst.provenance.family = "two_sided".into();
    Ok(inst)
}

/// Walker metric whose Walker spinor is a multiple Ricci principal spinor:
/// `a = −2ϑ_vv + F`, `b = −2ϑ_uu + G`, `c = 2ϑ_uv` with `F_uu = G_vv = h(x, y)`.
pub fn mk_ricci_null(theta: Expr, f: Expr, g: Expr) -> Result<FamilyInstance> {
    if depends_on(&f, Var::V) {
        return Err(Error::ConstraintViolated("F depends on v".into()));
    }
    if depends_on(&g, Var::U) {
        return Err(Error::ConstraintViolated("G depends on u".into()));
    }
    let h = d(&d(&f, Var::U), Var::U);
    let h_g = d(&d(&g, Var::V), Var::V);
    if depends_on(&h, Var::U) || depends_on(&h, Var::V) {
        return Err(Error::ConstraintViolated(format!("F_uu = {h} depends on u or v")));
    }
    if !is_zero(&Expr::sub(h.clone(), h_g.clone())) {
        return Err(Error::ConstraintViolated(format!("F_uu = {h} differs from G_vv = {h_g}")));
    }
    let a = Expr::add(Expr::scale(-2.0, d(&d(&theta, Var::V), Var::V)), f.clone());
    let b = Expr::add(Expr::scale(-2.0, d(&d(&theta, Var::U), Var::U)), g.clone());
    let c = Expr::scale(2.0, d(&d(&theta, Var::U), Var::V));
    let mut inst = mk_walker(a, b, c);
    inst.tag(Tag::RicciNull);
    // a_v = −2ϑ_vvv, so v-free a is the multiple principal spinor case
    if inst.has(Tag::Sesqui) {
        inst.tag(Tag::MultipleWps);
    }
    inst.provenance.family = "ricci_null".into();
    inst.provenance.coefficients = named(&["theta", "F", "G"], &[theta, f, g]);
    inst.provenance.expected.push(("h".into(), h.clone()));
    inst.provenance.expected.push(("S".into(), simplify(&Expr::scale(2.0, h))));
    Ok(inst)
}

/// Left-flat Walker metric built from five functions of `(x, y)`.
pub fn mk_left_flat(x_fn: Expr, y_fn: Expr, k5: Expr, k6: Expr, k7: Expr) -> Result<FamilyInstance> {
    let inputs = [x_fn, y_fn, k5, k6, k7];
    let names = ["X", "Y", "K5", "K6", "K7"];
    for (name, e) in names.iter().zip(&inputs) {
        require_xy(name, e)?;
    }
    let [xf, yf, k5, k6, k7] = &inputs;
    let e = Expr::call(Func::Exp, Expr::div(xf.clone(), Expr::Const(2.0)));
    let a = Expr::sub(Expr::mul(u(), d(xf, Var::X)), Expr::scale(4.0, k7.clone()));
    let c = Expr::add(
        Expr::scale(-4.0, Expr::mul(Expr::mul(u(), d(yf, Var::X)), e.clone())),
        Expr::scale(2.0, k6.clone()),
    );
    let uy_vx = Expr::add(Expr::mul(u(), d(yf, Var::Y)), Expr::mul(v(), d(yf, Var::X)));
    let b = sum([
        Expr::scale(-4.0, Expr::mul(uy_vx, e)),
        Expr::neg(Expr::mul(v(), d(xf, Var::Y))),
        Expr::scale(-4.0, k5.clone()),
    ]);
    let mut inst = mk_walker(a, b, c);
    inst.tag(Tag::LeftFlat);
    inst.provenance.family = "left_flat".into();
    inst.provenance.coefficients = named(&names, &inputs);
    Ok(inst)
}

/// The sesqui-Walker example `g` and its Einstein rescaling `h = v⁻² g`, with
/// the β-plane field `t = (u : v)` shared by both.
pub fn mk_cp_example(f: Expr) -> Result<(FamilyInstance, FamilyInstance, ProjParam)> {
    require_xy("F", &f)?;
    let e4 = Expr::call(Func::Exp, Expr::scale(4.0, f.clone()));
    let third = |k: f64, i: i32, j: i32| {
        Expr::div(Expr::scale(k, Expr::mul(e4.clone(), Expr::pow(u(), i))), Expr::scale(3.0, Expr::pow(v(), j)))
    };
    let fx = d(&f, Var::X);
    let fy = d(&f, Var::Y);
    let a = Expr::add(third(1.0, 4, 2), Expr::scale(4.0, Expr::mul(u(), fx)));
    let c = Expr::add(third(2.0, 3, 1), Expr::scale(2.0, Expr::mul(u(), fy.clone())));
    let b = Expr::add(Expr::mul(e4.clone(), Expr::pow(u(), 2)), Expr::scale(2.0, Expr::mul(v(), fy)));
    let t = ProjParam::new(u(), v());
    let chi = Expr::div(Expr::one(), v());

    let mut g = FamilyInstance::new(MetricSpec::walker(a.clone(), b.clone(), c.clone()), "cp", &[Tag::Walker, Tag::Sesqui]);
    g.t_field = t.clone();
    g.exclude.push(Exclusion::new(Var::V, 0.0));
    g.provenance.coefficients = vec![("F".into(), f.clone())];
    g.provenance.expected.push(("S".into(), Expr::zero()));

    let mut h = FamilyInstance::new(MetricSpec::conformal_walker(chi.clone(), a, b, c), "cp_einstein", &[Tag::Einstein, Tag::Type4Both]);
    h.t_field = t.clone();
    h.exclude.push(Exclusion::new(Var::V, 0.0));
    h.provenance.coefficients = vec![("F".into(), f), ("chi".into(), chi)];
    h.provenance.expected.push(("S".into(), Expr::zero()));
    Ok((g, h, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprkit::{eval, parse_expr, Point};

    fn p(s: &str) -> Expr {
        parse_expr(s).unwrap()
    }

    fn parts(inst: &FamilyInstance) -> (Expr, Expr, Expr) {
        let (a, b, c) = inst.spec.walker_parts().unwrap();
        (a.clone(), b.clone(), c.clone())
    }

    fn same(e: &Expr, expected: &str) -> bool {
        is_zero(&Expr::sub(e.clone(), p(expected)))
    }

    #[test]
    fn walker_tags() {
        assert_eq!(mk_walker(p("u^2"), p("v^2"), p("u")).tags, vec![Tag::Walker, Tag::Sesqui, Tag::TwoSided]);
        assert_eq!(mk_walker(p("v"), Expr::zero(), Expr::zero()).tags, vec![Tag::Walker]);
        assert!(matches!(mk_two_sided(p("v"), Expr::zero(), Expr::zero()), Err(Error::ConstraintViolated(_))));
    }

    #[test]
    fn sd2015_with_a_only() {
        let mut k: [Expr; 15] = std::array::from_fn(|_| Expr::zero());
        k[0] = Expr::one();
        let (a, b, c) = parts(&mk_sd2015(k).unwrap());
        assert!(same(&a, "u^3") && same(&b, "u*v^2") && same(&c, "u^2*v"));
        let mut bad: [Expr; 15] = std::array::from_fn(|_| Expr::zero());
        bad[3] = p("x*v");
        assert_eq!(mk_sd2015(bad), Err(Error::CoefficientDependsOnUV { name: "D".into() }));
    }

    #[test]
    fn sd_two_sided_nests_in_sd2015() {
        let k9: [Expr; 9] = std::array::from_fn(|i| p(&format!("{}*x + y^2", i + 1)));
        let small = mk_sd_two_sided(k9.clone()).unwrap();
        let by = |n: &str| k9[SD_TWO_SIDED_NAMES.iter().position(|m| *m == n).unwrap()].clone();
        let k15: [Expr; 15] = std::array::from_fn(|i| match SD2015_NAMES[i] {
            "A" | "B" | "D" | "F" | "Q" => Expr::zero(),
            "K" => Expr::neg(by("C")),
            n => by(n),
        });
        let big = mk_sd2015(k15).unwrap();
        let (a1, b1, c1) = parts(&small);
        let (a2, b2, c2) = parts(&big);
        for (x, y) in [(a1, a2), (b1, b2), (c1, c2)] {
            assert!(is_zero(&Expr::sub(x, y)));
        }
        assert!(small.has(Tag::TwoSided) && small.has(Tag::Sd));
    }

    #[test]
    fn ricci_null_records_h() {
        let inst = mk_ricci_null(Expr::zero(), p("u^2"), p("v^2")).unwrap();
        assert!(same(inst.expected("h").unwrap(), "2"));
        assert!(same(inst.expected("S").unwrap(), "4"));
        assert!(inst.has(Tag::MultipleWps));
        let cubic = mk_ricci_null(p("v^3*x"), p("u^2"), p("v^2")).unwrap();
        assert!(!cubic.has(Tag::MultipleWps));
        assert!(mk_ricci_null(Expr::zero(), p("u^2"), p("3*v^2")).is_err());
        assert!(mk_ricci_null(Expr::zero(), p("u^2*v"), p("v^2")).is_err());
    }

    #[test]
    fn left_flat_substitution() {
        let (a, b, c) = parts(&mk_left_flat(Expr::zero(), p("x*y"), Expr::zero(), Expr::zero(), Expr::zero()).unwrap());
        assert!(same(&a, "0"));
        assert!(same(&c, "-4*u*y"));
        assert!(same(&b, "-4*(u*x + v*y)"));
    }

    #[test]
    fn cp_example_golden_values() {
        let (g, h, _) = mk_cp_example(Expr::zero()).unwrap();
        let pt = Point::new(1.0, 1.0, 0.0, 0.0);
        let (a, b, c) = parts(&g);
        for (e, want) in [(a, 1.0 / 3.0), (c, 2.0 / 3.0), (b, 1.0)] {
            assert!((eval(&e, &pt).unwrap() - want).abs() < 1e-15);
        }
        assert!(h.has(Tag::Einstein));
        assert_eq!(g.exclude, vec![Exclusion { var: 'v', value: 0.0 }]);
    }
}
