use nullplane::error::Error;
use nullplane::exprkit::{eval, eval_jet, parse_expr, sample_unit_box, Var};
use nullplane::families::{mk_cp_example, mk_two_sided, random_instance, Tag, FAMILY_NAMES};
use nullplane::lab::{run_analysis, AnalysisConfig, Report, SpecSource, VerdictKind};

fn analyze(inst: &nullplane::families::FamilyInstance, points: usize) -> Report {
    let mut cfg = AnalysisConfig::for_instance(inst);
    cfg.points = points;
    run_analysis(&cfg).unwrap()
}

#[test]
fn flat_walker_is_type_o_everywhere() {
    let text = "[metric]\nkind = walker\na = 0\nb = 0\nc = 0\n";
    let r = run_analysis(&AnalysisConfig::new(SpecSource::Text(text.into()))).unwrap();
    for p in &r.points {
        assert_eq!(p.scalar, 0.0);
        assert_eq!(p.ricci_residual, 0.0);
        assert_eq!(p.sd.as_ref().unwrap().petrov, "O");
        assert_eq!(p.asd.as_ref().unwrap().petrov, "O");
        let res = p.residuals.as_ref().unwrap();
        for x in [res.z_parallel, res.w_frobenius, res.w_parallel, res.d_parallel, res.h_frobenius, res.ricci_null] {
            assert_eq!(x, 0.0);
        }
    }
}

#[test]
fn two_sided_example_has_zero_obstruction() {
    let inst = mk_two_sided(parse_expr("u^2").unwrap(), parse_expr("v^2").unwrap(), parse_expr("u").unwrap()).unwrap();
    let r = analyze(&inst, 20);
    assert!(r.flags.two_sided);
    assert!(r.flags.obstruction_zero);
    assert_eq!(r.verdict.value, VerdictKind::Yes);
}

#[test]
fn cp_example_is_not_conformally_two_sided() {
    let (g, h, _) = mk_cp_example(parse_expr("x - y^2").unwrap()).unwrap();
    assert_eq!(analyze(&g, 10).verdict.value, VerdictKind::NoH);
    assert_eq!(analyze(&h, 10).verdict.value, VerdictKind::NoH);
}

#[test]
fn reports_round_trip_through_json() {
    for name in ["walker", "cp", "sd2015"] {
        let r = analyze(&random_instance(name, 1, 2).unwrap(), 5);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), r.to_json());
    }
}

#[test]
fn flags_are_monotone_and_tags_hold_on_the_corpus() {
    for name in FAMILY_NAMES {
        for seed in 0..3 {
            let inst = random_instance(name, seed, 2).unwrap();
            let r = analyze(&inst, 8);
            let f = &r.flags;
            assert!(!f.two_sided || f.integrable_sesqui_walker, "{name} {seed}");
            assert!(!f.integrable_sesqui_walker || f.sesqui_walker, "{name} {seed}");
            assert!(!f.sesqui_walker || f.walker_form, "{name} {seed}");
            for e in &r.expectations {
                assert!(e.holds, "{name} seed {seed}: {} fails", e.tag);
            }
            if inst.has(Tag::TwoSided) {
                assert_eq!(r.verdict.value, VerdictKind::Yes, "{name} seed {seed}: {}", r.verdict.reason);
            }
        }
    }
}

#[test]
fn general_kind_is_inconclusive() {
    let text = "[metric]\nkind = general\ng_ux = 1\ng_vy = 1\ng_xx = u^2\ng_xy = u\ng_yy = v^2\n";
    let r = run_analysis(&AnalysisConfig::new(SpecSource::Text(text.into()))).unwrap();
    assert_eq!(r.verdict.value, VerdictKind::Inconclusive);
    assert!(r.kappa.is_none());
}

#[test]
fn domain_errors_carry_the_point() {
    let text = "[metric]\nkind = walker\na = ln(u - 1)\nb = 0\nc = 0\n[domain]\nbox = 0.5 1.5\npoints = 40\n";
    match run_analysis(&AnalysisConfig::new(SpecSource::Text(text.into()))) {
        Err(Error::Domain { reason, .. }) => assert!(reason.contains("at point ["), "{reason}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn builder_constraints_hold_numerically() {
    // symbolic checks in the builders against jets at ten points
    for seed in 0..5 {
        for p in sample_unit_box(seed, 10) {
            let sesqui = random_instance("sesqui", seed, 3).unwrap();
            let (a, _, _) = sesqui.spec.walker_parts().unwrap();
            assert_eq!(eval_jet(a, &p, 1).unwrap().d(Var::V), 0.0);

            let two = random_instance("two_sided", seed, 3).unwrap();
            let (a, _, c) = two.spec.walker_parts().unwrap();
            assert_eq!(eval_jet(a, &p, 1).unwrap().d(Var::V), 0.0);
            assert_eq!(eval_jet(c, &p, 1).unwrap().d(Var::V), 0.0);

            let rn = random_instance("ricci_null", seed, 2).unwrap();
            let h = rn.expected("h").unwrap();
            let s = rn.expected("S").unwrap();
            assert!((eval(s, &p).unwrap() - 2.0 * eval(h, &p).unwrap()).abs() < 1e-12);
        }
    }
    let bad = mk_two_sided(parse_expr("u*v").unwrap(), parse_expr("0").unwrap(), parse_expr("0").unwrap());
    assert!(matches!(bad, Err(Error::ConstraintViolated(_))));
}
