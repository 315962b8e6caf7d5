use rayon::prelude::*;

use super::config::{resolve_targets, AnalysisConfig, AnalysisTarget, Explicit};
use super::report::*;
use crate::error::{Error, Result};
use crate::exprkit::{eval, sample_points, Point};
use crate::families::Tag;
use crate::frames::{
    autoparallel_residual_with, beta_dist, dist_d, dist_h, dist_z, frobenius_residual, null_residual,
    parallel_residual_with, walker_tetrad, Distribution, Tetrad,
};
use crate::tensor::{christoffel, curvature, metric_jet, MetricKind, MetricSpec};
use crate::weylalg::{
    default_calibration, einstein_residual, obstruction_from, obstruction_residual, ricci_null_residual,
    root_structure, rps_discriminant, weyl_quartics, QuarticForm,
};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "NULLPLANE_THREADS";

struct Frames {
    tet: Tetrad,
    z: Distribution,
    w: Distribution,
    d: Distribution,
    h: Distribution,
}

fn with_point(e: Error, p: &Point) -> Error {
    match e {
        Error::Domain { expr, reason } => Error::Domain { expr, reason: format!("{reason} at point {:?}", p.0) },
        other => other,
    }
}

fn quartic_record(q: &QuarticForm, l0: f64, l1: f64, tol: f64) -> QuarticRecord {
    let roots = root_structure(q, tol);
    QuarticRecord {
        coeffs: q.coeffs,
        rel: std::array::from_fn(|k| q.rel(k)),
        petrov: roots.type_string(),
        roots,
        order_at_spinor: q.root_order_at(l0, l1, tol),
    }
}

fn analyze_point(
    target: &AnalysisTarget,
    frames: Option<&Frames>,
    base: Option<&MetricSpec>,
    kappa: Option<f64>,
    cfg: &AnalysisConfig,
    p: &Point,
) -> Result<PointRecord> {
    let spec = &target.spec;
    let mj = metric_jet(spec, p, cfg.jet_order)?;
    let curv = curvature(&mj);
    let scale = curv.scale();
    let floor = scale.max(1e-30);
    let scalar_expected_gap = match target.expected.iter().find(|(n, _)| n == "S") {
        Some((_, e)) => {
            let want = eval(e, p)?;
            Some((curv.scalar() - want).abs() / want.abs().max(floor))
        }
        None => None,
    };
    let mut rec = PointRecord {
        point: p.0,
        scalar: curv.scalar(),
        curvature_scale: scale,
        ricci_residual: curv.ricci().amax() / floor,
        einstein_residual: einstein_residual(&curv),
        sd: None,
        asd: None,
        residuals: None,
        obstruction: None,
        scalar_expected_gap,
    };
    let Some(fr) = frames else {
        return Ok(rec);
    };
    let conn = christoffel(&mj);
    let tp = fr.tet.at(p)?;
    let (sd, asd) = weyl_quartics(&curv, &tp);
    let (l0, l1) = target.t_field.at(p)?;
    rec.sd = Some(quartic_record(&sd, 1.0, 0.0, cfg.zero_tol));
    rec.asd = Some(quartic_record(&asd, l0, l1, cfg.zero_tol));
    rec.residuals = Some(Residuals {
        z_null: null_residual(&mj.g_value(), &fr.z, p)?,
        z_parallel: parallel_residual_with(&conn, &fr.z, p)?,
        w_frobenius: frobenius_residual(&fr.w, p)?,
        w_autoparallel: autoparallel_residual_with(&conn, &fr.w, p)?,
        w_parallel: parallel_residual_with(&conn, &fr.w, p)?,
        d_parallel: parallel_residual_with(&conn, &fr.d, p)?,
        h_frobenius: frobenius_residual(&fr.h, p)?,
        ricci_null: ricci_null_residual(&curv, &fr.z, p)?,
        rps_discriminant: rps_discriminant(&curv, &fr.z, p)?,
    });
    if let Some(kappa) = kappa {
        rec.obstruction = Some(match (spec.kind(), base) {
            (MetricKind::ConformalWalker, Some(b)) => obstruction_residual(b, p, kappa, &target.t_field)?,
            _ => obstruction_from(&asd, &curv, kappa, l0, l1),
        });
    }
    Ok(rec)
}

fn max_of(recs: &[PointRecord], f: impl Fn(&PointRecord) -> Option<f64>) -> Option<f64> {
    recs.iter().map(f).try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v))).filter(|m| m.is_finite())
}

fn summarize(recs: &[PointRecord]) -> Summary {
    let types = |side: fn(&PointRecord) -> Option<&QuarticRecord>| {
        let mut t: Vec<String> = recs.iter().filter_map(|r| side(r).map(|q| q.petrov.clone())).collect();
        t.sort();
        t.dedup();
        t
    };
    let res = |f: fn(&Residuals) -> f64| max_of(recs, |r| r.residuals.as_ref().map(f));
    let qmax = |side: fn(&PointRecord) -> Option<&QuarticRecord>| {
        max_of(recs, |r| side(r).map(|q| q.rel.iter().fold(0.0f64, |m, x| m.max(*x))))
    };
    let qmin = |side: fn(&PointRecord) -> Option<&QuarticRecord>| {
        recs.iter().map(|r| side(r).map(|q| q.order_at_spinor)).collect::<Option<Vec<_>>>().and_then(|v| v.into_iter().min())
    };
    Summary {
        max_abs_scalar_rel: max_of(recs, |r| Some(r.scalar.abs() / r.curvature_scale.max(1e-30))).unwrap_or(0.0),
        max_ricci_residual: max_of(recs, |r| Some(r.ricci_residual)).unwrap_or(0.0),
        max_einstein_residual: max_of(recs, |r| Some(r.einstein_residual)).unwrap_or(0.0),
        max_sd_rel: qmax(|r| r.sd.as_ref()),
        max_asd_rel: qmax(|r| r.asd.as_ref()),
        min_sd_order_at_spinor: qmin(|r| r.sd.as_ref()),
        min_asd_order_at_spinor: qmin(|r| r.asd.as_ref()),
        sd_types: types(|r| r.sd.as_ref()),
        asd_types: types(|r| r.asd.as_ref()),
        max_z_null: res(|r| r.z_null),
        max_z_parallel: res(|r| r.z_parallel),
        max_w_frobenius: res(|r| r.w_frobenius),
        max_w_parallel: res(|r| r.w_parallel),
        max_d_parallel: res(|r| r.d_parallel),
        max_h_frobenius: res(|r| r.h_frobenius),
        max_ricci_null: res(|r| r.ricci_null),
        max_rps_discriminant: res(|r| r.rps_discriminant),
        max_obstruction_rel: max_of(recs, |r| r.obstruction.map(|o| o.relative())),
        max_scalar_expected_gap: max_of(recs, |r| r.scalar_expected_gap),
    }
}

/// Flags from the summary; each is a threshold test on one maximum, chained so that
/// `two_sided ⇒ integrable_sesquiWalker ⇒ sesquiWalker ⇒ walker_form`.
pub fn flags_from(m: &Summary, tol: f64) -> Flags {
    let le = |o: Option<f64>| o.is_some_and(|v| v <= tol);
    let z_parallel = le(m.max_z_parallel);
    let walker_form = z_parallel && le(m.max_z_null);
    let w_integrable = le(m.max_w_frobenius);
    let w_parallel = le(m.max_w_parallel);
    let h_integrable = le(m.max_h_frobenius);
    let sesqui_walker = walker_form && w_integrable;
    let integrable_sesqui_walker = sesqui_walker && h_integrable;
    let sd = le(m.max_asd_rel);
    Flags {
        walker_form,
        z_parallel,
        w_integrable,
        w_parallel,
        h_integrable,
        sesqui_walker,
        integrable_sesqui_walker,
        two_sided: integrable_sesqui_walker && w_parallel,
        sd,
        ricci_null: le(m.max_ricci_null),
        left_flat: sd && m.max_ricci_residual <= tol,
        obstruction_zero: le(m.max_obstruction_rel),
    }
}

/// Local conformal two-sidedness: `H` integrable, both spinors multiple principal
/// spinors, and `Ψ₂ = S/12` in the Walker gauge. Residuals between the two thresholds
/// make the verdict inconclusive.
pub fn verdict_from(kind: MetricKind, m: &Summary, flags: &Flags, nonzero: f64) -> Verdict {
    let v = |value, reason: String| Verdict { value, reason };
    if kind == MetricKind::General {
        return v(VerdictKind::Inconclusive, "general metrics carry no Walker gauge to test in".into());
    }
    let h = m.max_h_frobenius.unwrap_or(f64::NAN);
    if !flags.h_integrable {
        if h > nonzero {
            return v(VerdictKind::NoH, format!("H Frobenius residual {h:.2e}"));
        }
        return v(VerdictKind::Inconclusive, format!("H Frobenius residual {h:.2e} lies between the thresholds"));
    }
    match (m.min_sd_order_at_spinor, m.min_asd_order_at_spinor) {
        (Some(a), Some(b)) if a >= 2 && b >= 2 => {}
        (a, b) => {
            return v(
                VerdictKind::NoWps,
                format!("root orders at the spinors: SD {}, ASD {}", a.unwrap_or(0), b.unwrap_or(0)),
            )
        }
    }
    let o = m.max_obstruction_rel.unwrap_or(f64::NAN);
    if !flags.obstruction_zero {
        if o > nonzero {
            return v(VerdictKind::NoObstruction, format!("|psi2 - S/12| relative {o:.2e}"));
        }
        return v(VerdictKind::Inconclusive, format!("|psi2 - S/12| relative {o:.2e} lies between the thresholds"));
    }
    v(VerdictKind::Yes, format!("H integrable, spinors multiple, obstruction {o:.1e}"))
}

fn expectations(tags: &[Tag], m: &Summary, f: &Flags, tol: f64) -> Vec<Expectation> {
    tags.iter()
        .map(|tag| {
            let holds = match tag {
                Tag::Walker => f.walker_form,
                Tag::Sesqui => f.sesqui_walker,
                Tag::TwoSided => f.two_sided,
                Tag::Sd => f.sd,
                Tag::RicciNull => f.ricci_null,
                Tag::MultipleWps => m.min_asd_order_at_spinor.is_some_and(|k| k >= 2),
                Tag::LeftFlat => f.left_flat,
                Tag::Einstein => m.max_einstein_residual <= tol,
                Tag::Type4Both => m.sd_types == ["{4}"] && m.asd_types == ["{4}"],
            };
            Expectation { tag: tag.name().to_string(), holds }
        })
        .collect()
}

fn echo(target: &AnalysisTarget, cfg: &AnalysisConfig) -> ConfigEcho {
    let components = match &target.spec {
        MetricSpec::Walker { a, b, c } => vec![("a", a), ("b", b), ("c", c)],
        MetricSpec::ConformalWalker { chi, a, b, c } => vec![("chi", chi), ("a", a), ("b", b), ("c", c)],
        MetricSpec::General { .. } => Vec::new(),
    };
    let mut components: Vec<(String, String)> = components.into_iter().map(|(k, e)| (k.to_string(), e.to_string())).collect();
    if let MetricSpec::General { g } = &target.spec {
        for i in 0..4 {
            for j in i..4 {
                if !g[i][j].is_const(0.0) {
                    components.push((format!("g_{}{}", "uvxy".as_bytes()[i] as char, "uvxy".as_bytes()[j] as char), g[i][j].to_string()));
                }
            }
        }
    }
    ConfigEcho {
        kind: target.spec.kind().name().to_string(),
        components,
        t_field: [target.t_field.t0.to_string(), target.t_field.t1.to_string()],
        lo: cfg.lo,
        hi: cfg.hi,
        points: cfg.points,
        seed: cfg.seed,
        jet_order: cfg.jet_order,
        zero_tol: cfg.zero_tol,
        nonzero_tol: cfg.nonzero_tol,
    }
}

/// Thread pool sized by `NULLPLANE_THREADS`, or `None` for rayon's default.
pub fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(text) = std::env::var(THREADS_ENV) else {
        return Ok(None);
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{text}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))
}

/// Analyze one target. `kappa` is required for the obstruction; pass `None` only for
/// general metrics.
pub fn analyze_target(target: &AnalysisTarget, cfg: &AnalysisConfig, kappa: Option<f64>) -> Result<Report> {
    cfg.validate()?;
    let frames = match walker_tetrad(&target.spec) {
        Ok(tet) => Some(Frames {
            z: dist_z(&tet),
            w: beta_dist(&target.t_field, &tet),
            d: dist_d(&target.t_field, &tet),
            h: dist_h(&target.t_field, &tet),
            tet,
        }),
        Err(Error::Kind { .. }) => None,
        Err(e) => return Err(e),
    };
    let kappa = if frames.is_some() {
        Some(kappa.ok_or_else(|| Error::Calibration("no quartic normalization constant available".into()))?)
    } else {
        None
    };
    let base = target.spec.walker_base();
    let points = sample_points(cfg.seed, cfg.points, cfg.lo, cfg.hi);
    let run = || -> Result<Vec<PointRecord>> {
        points
            .par_iter()
            .map(|p| analyze_point(target, frames.as_ref(), base.as_ref(), kappa, cfg, p).map_err(|e| with_point(e, p)))
            .collect()
    };
    let recs = match thread_pool()? {
        Some(pool) => pool.install(run)?,
        None => run()?,
    };
    let summary = summarize(&recs);
    let flags = flags_from(&summary, cfg.zero_tol);
    let verdict = verdict_from(target.spec.kind(), &summary, &flags, cfg.nonzero_tol);
    let expectations = expectations(&target.tags, &summary, &flags, cfg.zero_tol);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        label: target.label.clone(),
        config: echo(target, cfg),
        kappa,
        points: recs,
        summary,
        flags,
        verdict,
        expectations,
    })
}

/// Analyze every target the config resolves to (two for the `cp` family, one otherwise).
pub fn run_analyses(cfg: &AnalysisConfig, explicit: Explicit) -> Result<Vec<Report>> {
    let mut cfg = cfg.clone();
    let targets = resolve_targets(&mut cfg, explicit)?;
    let kappa = if targets.iter().any(|t| t.spec.kind() != MetricKind::General) {
        Some(default_calibration()?.kappa)
    } else {
        None
    };
    targets.iter().map(|t| analyze_target(t, &cfg, kappa)).collect()
}

/// Analyze the first target the config resolves to.
pub fn run_analysis(cfg: &AnalysisConfig) -> Result<Report> {
    Ok(run_analyses(cfg, Explicit::default())?.remove(0))
}
