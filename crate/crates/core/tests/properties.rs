//! Property tests over seeded random expressions and random Walker metrics.

use nalgebra::Matrix4;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nullplane::exprkit::{
    diff_expr, eval, eval_jet, fd_derivative, parse_expr, random_expr, sample_unit_box, Expr, Func, Point, Var,
};
use nullplane::families::{random_instance, random_polys};
use nullplane::frames::{
    alpha_dist, autoparallel_residual, beta_dist, dist_d, dist_h, frobenius_residual, null_residual,
    parallel_residual, walker_tetrad, ProjParam,
};
use nullplane::tensor::{
    conformal_rescale, curvature, metric_jet, volume_and_duals, walker_box, walker_box_closed_form, weyl_split,
    MetricSpec,
};
use nullplane::weylalg::{family_bivectors, quartic_from_tensor, root_structure, weyl_quartics, QuarticForm, Side};

fn expr_from_seed(seed: u64, depth: usize) -> Expr {
    random_expr(&mut ChaCha8Rng::seed_from_u64(seed), depth)
}

fn point() -> impl Strategy<Value = Point> {
    prop::array::uniform4(0.5f64..1.5).prop_map(Point)
}

fn walker_from_seed(seed: u64) -> MetricSpec {
    let mut p = random_polys(seed, 2, &Var::ALL, 3).into_iter();
    MetricSpec::walker(p.next().unwrap(), p.next().unwrap(), p.next().unwrap())
}

fn positive_factor(seed: u64) -> Expr {
    Expr::call(Func::Exp, Expr::scale(0.3, random_polys(seed, 1, &Var::ALL, 1).remove(0)))
}

fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.amax()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_partials_agree_with_finite_differences(seed in any::<u64>(), p in point()) {
        let e = expr_from_seed(seed, 5);
        let Ok(jet) = eval_jet(&e, &p, 3) else { return Ok(()) };
        let scale = jet.max_abs().max(1e-300);
        for (mi, value) in jet.iter().filter(|(mi, _)| mi.iter().sum::<u8>() > 0) {
            // central differences near a pole are meaningless; skip rather than loosen
            let (Ok(a), Ok(b)) = (fd_derivative(&e, &p, mi, 1e-3), fd_derivative(&e, &p, mi, 5e-4)) else {
                return Ok(());
            };
            let fd = (4.0 * b - a) / 3.0;
            if (a - b).abs() > 1e-3 * scale {
                return Ok(());
            }
            prop_assert!((value - fd).abs() <= 1e-5 * scale, "{e} d{mi:?}: jet {value} fd {fd}");
        }
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>(), p in point()) {
        let e = expr_from_seed(seed, 5);
        for (x, y) in [(Var::U, Var::V), (Var::X, Var::Y), (Var::U, Var::Y)] {
            let xy = eval(&diff_expr(&diff_expr(&e, x), y), &p);
            let yx = eval(&diff_expr(&diff_expr(&e, y), x), &p);
            if let (Ok(a), Ok(b)) = (xy, yx) {
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0), "{e}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn parse_print_parse_is_a_fixpoint(seed in any::<u64>()) {
        let e = expr_from_seed(seed, 5);
        let once = parse_expr(&e.to_string()).unwrap();
        prop_assert_eq!(&once, &e);
        prop_assert_eq!(parse_expr(&once.to_string()).unwrap(), once);
    }

    #[test]
    fn projective_scaling_leaves_residuals_unchanged(seed in 0u64..10_000, t0 in -2.0f64..2.0, t1 in -2.0f64..2.0) {
        prop_assume!(t0.abs() + t1.abs() > 0.1);
        let spec = walker_from_seed(seed);
        let tet = walker_tetrad(&spec).unwrap();
        let t = ProjParam::fixed(t0, t1);
        let sigma = positive_factor(seed + 1);
        let ts = t.scaled(&sigma);
        for p in sample_unit_box(seed, 3) {
            let pairs = [
                (frobenius_residual(&beta_dist(&t, &tet), &p), frobenius_residual(&beta_dist(&ts, &tet), &p)),
                (parallel_residual(&spec, &beta_dist(&t, &tet), &p), parallel_residual(&spec, &beta_dist(&ts, &tet), &p)),
                (frobenius_residual(&dist_h(&t, &tet), &p), frobenius_residual(&dist_h(&ts, &tet), &p)),
                (parallel_residual(&spec, &dist_d(&t, &tet), &p), parallel_residual(&spec, &dist_d(&ts, &tet), &p)),
            ];
            for (a, b) in pairs {
                let (a, b) = (a.unwrap(), b.unwrap());
                prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn root_structure_ignores_overall_scale(c in prop::array::uniform5(-3.0f64..3.0), k in 1e-3f64..1e3) {
        let q = QuarticForm::new(Side::SD, c);
        let scaled = QuarticForm::new(Side::SD, c.map(|x| -k * x));
        prop_assert_eq!(root_structure(&q, 1e-7).annotated(), root_structure(&scaled, 1e-7).annotated());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn riemann_symmetries_and_weyl_trace(seed in any::<u64>()) {
        let spec = walker_from_seed(seed);
        for p in sample_unit_box(seed, 10) {
            let curv = curvature(&metric_jet(&spec, &p, 2).unwrap());
            let (r, w, ginv) = (curv.riemann(), curv.weyl(), curv.ginv());
            let tol = 1e-9 * r.max_abs().max(1e-30);
            for a in 0..4 { for b in 0..4 { for c in 0..4 { for d in 0..4 {
                let x = r.get(a, b, c, d);
                prop_assert!((x + r.get(b, a, c, d)).abs() <= tol);
                prop_assert!((x + r.get(a, b, d, c)).abs() <= tol);
                prop_assert!((x - r.get(c, d, a, b)).abs() <= tol);
                prop_assert!((x + r.get(a, c, d, b) + r.get(a, d, b, c)).abs() <= tol);
            }}}}
            for b in 0..4 { for d in 0..4 {
                let trace: f64 = (0..4).flat_map(|a| (0..4).map(move |c| (a, c))).map(|(a, c)| ginv[(a, c)] * w.get(a, b, c, d)).sum();
                prop_assert!(trace.abs() <= tol, "Weyl trace {trace}");
            }}
        }
    }
}

#[test]
fn walker_corpus_geometry() {
    for seed in 0..20u64 {
        let spec = walker_from_seed(seed);
        let chi = positive_factor(seed + 100);
        let (a, b, c) = spec.walker_parts().unwrap();
        let cw = MetricSpec::conformal_walker(chi.clone(), a.clone(), b.clone(), c.clone());
        let hat = conformal_rescale(&spec, &chi);
        let tet = walker_tetrad(&spec).unwrap();
        let tet_cw = walker_tetrad(&cw).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params: Vec<ProjParam> = (0..20)
            .map(|_| {
                use rand::Rng;
                ProjParam::fixed(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
            .collect();
        for p in sample_unit_box(seed, 5) {
            let curv = curvature(&metric_jet(&spec, &p, 2).unwrap());
            let g = curv.g();
            let tp = tet.at(&p).unwrap();
            assert!(tp.normalization_error(&g) < 1e-12);
            let g_cw = cw.value_at(&p).unwrap();
            assert!(tet_cw.at(&p).unwrap().normalization_error(&g_cw) < 1e-12);

            // S and both box operators
            let dd = |e: &Expr, x, y| eval(&diff_expr(&diff_expr(e, x), y), &p).unwrap();
            let s = dd(a, Var::U, Var::U) + dd(b, Var::V, Var::V) + 2.0 * dd(c, Var::U, Var::V);
            assert!((curv.scalar() - s).abs() <= 1e-8 * s.abs().max(curv.scale()));
            let closed = walker_box_closed_form(a, b, c, &chi, &p).unwrap();
            let generic = walker_box(&spec, &chi, &p).unwrap();
            assert!((closed - generic).abs() <= 1e-8 * generic.abs().max(eval_jet(&chi, &p, 2).unwrap().max_abs()));

            // null planes
            for t in &params {
                assert!(null_residual(&g, &alpha_dist(t, &tet), &p).unwrap() < 1e-10);
                assert!(null_residual(&g, &beta_dist(t, &tet), &p).unwrap() < 1e-10);
                let d = dist_d(t, &tet).values(&p).unwrap()[0];
                for h in dist_h(t, &tet).values(&p).unwrap() {
                    assert!(h.dot(&(g * d)).abs() < 1e-10);
                }
            }

            // Hodge split
            let dual = volume_and_duals(&g, &curv.ginv(), &tp.l, &tp.mt, p).unwrap();
            let split = weyl_split(&curv.weyl(), &dual);
            let scale = curv.weyl().max_abs().max(1e-30);
            assert!(split.dual_mismatch < 1e-9);
            assert!(dual.right_dual(&split.plus).sub(&split.plus).max_abs() <= 1e-9 * scale);
            assert!(dual.right_dual(&split.minus).add(&split.minus).max_abs() <= 1e-9 * scale);
            let sd = family_bivectors(&tp, Side::SD);
            let asd = family_bivectors(&tp, Side::ASD);
            for x in &sd {
                for y in &sd {
                    assert!(split.minus.pair(x, y).abs() <= 1e-9 * split.minus.pair_abs(x, y).max(scale));
                }
            }
            for x in &asd {
                for y in &asd {
                    assert!(split.plus.pair(x, y).abs() <= 1e-9 * split.plus.pair_abs(x, y).max(scale));
                }
            }

            // quartic purity
            let (full_sd, full_asd) = weyl_quartics(&curv, &tp);
            let pure_sd = quartic_from_tensor(&split.plus, &tp, Side::SD);
            let pure_asd = quartic_from_tensor(&split.minus, &tp, Side::ASD);
            for k in 0..5 {
                assert!((full_sd.coeffs[k] - pure_sd.coeffs[k]).abs() <= 1e-9 * full_sd.reference());
                assert!((full_asd.coeffs[k] - pure_asd.coeffs[k]).abs() <= 1e-9 * full_asd.reference());
            }

            // conformal invariance of C^a_bcd and of the root structure
            let curv_hat = curvature(&metric_jet(&hat, &p, 2).unwrap());
            let up = curv.weyl().raise_first(&curv.ginv());
            let up_hat = curv_hat.weyl().raise_first(&curv_hat.ginv());
            assert!(up.sub(&up_hat).max_abs() <= 1e-7 * up.max_abs().max(1e-30));
            let curv_cw = curvature(&metric_jet(&cw, &p, 2).unwrap());
            let (sd_cw, asd_cw) = weyl_quartics(&curv_cw, &tet_cw.at(&p).unwrap());
            assert_eq!(root_structure(&full_sd, 1e-7).annotated(), root_structure(&sd_cw, 1e-7).annotated());
            assert_eq!(root_structure(&full_asd, 1e-7).annotated(), root_structure(&asd_cw, 1e-7).annotated());
            assert!(max_abs(&(g_cw - g * eval(&chi, &p).unwrap().powi(2))) < 1e-12 * max_abs(&g_cw).max(1.0));
        }
    }
}

#[test]
fn asd_quartic_vanishes_exactly_when_the_asd_part_does() {
    for (name, expect_zero) in [("sd2015", true), ("sd_two_sided", true), ("left_flat", true), ("walker", false)] {
        for seed in 0..4 {
            let inst = random_instance(name, seed, 2).unwrap();
            let tet = walker_tetrad(&inst.spec).unwrap();
            for p in sample_unit_box(seed + 10, 5) {
                let curv = curvature(&metric_jet(&inst.spec, &p, 2).unwrap());
                let tp = tet.at(&p).unwrap();
                let dual = volume_and_duals(&curv.g(), &curv.ginv(), &tp.l, &tp.mt, p).unwrap();
                let split = weyl_split(&curv.weyl(), &dual);
                let (sd, asd) = weyl_quartics(&curv, &tp);
                let quartic_zero = asd.is_zero(1e-7);
                let scale = sd.reference().max(asd.reference());
                let tensor_zero = split.minus.max_abs() <= 1e-7 * scale;
                let (q, t) = if name == "left_flat" { (sd.is_zero(1e-7), split.plus.max_abs() <= 1e-7 * scale) } else { (quartic_zero, tensor_zero) };
                assert_eq!(q, t, "{name} seed {seed}");
                if name != "left_flat" {
                    assert_eq!(quartic_zero, expect_zero, "{name} seed {seed}");
                }
            }
        }
    }
}

#[test]
fn parallel_implies_autoparallel_implies_integrable() {
    let tol = 1e-9;
    let mut parallel_seen = 0;
    for name in ["walker", "sesqui", "two_sided", "conformal_sesqui", "sd_two_sided"] {
        for seed in 0..4 {
            let inst = random_instance(name, seed, 2).unwrap();
            let tet = walker_tetrad(&inst.spec).unwrap();
            let t = ProjParam::fixed(0.0, 1.0);
            for d in [beta_dist(&t, &tet), dist_d(&t, &tet), dist_h(&t, &tet), alpha_dist(&ProjParam::fixed(1.0, 0.0), &tet)] {
                for p in sample_unit_box(seed, 4) {
                    let par = parallel_residual(&inst.spec, &d, &p).unwrap();
                    let auto = autoparallel_residual(&inst.spec, &d, &p).unwrap();
                    let frob = frobenius_residual(&d, &p).unwrap();
                    if par < tol {
                        parallel_seen += 1;
                        assert!(auto < tol && frob < tol, "{name} {}: {par} {auto} {frob}", d.label);
                    }
                    if auto < tol {
                        assert!(frob < tol, "{name} {}: {auto} {frob}", d.label);
                    }
                }
            }
        }
    }
    assert!(parallel_seen > 0);
}
