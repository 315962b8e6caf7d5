use std::sync::OnceLock;

use super::quartic::{weyl_quartic, Side};
use crate::error::{Error, Result};
use crate::exprkit::{diff_expr, is_zero, parse_expr, sample_unit_box, Point, Var};
use crate::frames::walker_tetrad;
use crate::tensor::{curvature, metric_jet, MetricSpec};

/// Global normalization linking quartic coefficients to Weyl components.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CalibrationConstant {
    pub kappa: f64,
    /// Standard deviation over mean of all sampled ratios.
    pub spread: f64,
    pub samples: usize,
    /// Largest relative gap between the SD and ASD ratios at one point.
    pub side_gap: f64,
    pub instances: Vec<String>,
}

fn check_two_sided(spec: &MetricSpec) -> Result<()> {
    let MetricSpec::Walker { a, c, .. } = spec else {
        return Err(Error::Calibration("calibration needs plain walker instances".into()));
    };
    for (name, e) in [("a", a), ("c", c)] {
        if !is_zero(&diff_expr(e, Var::V)) {
            return Err(Error::Calibration(format!("instance is not two-sided: {name}_v does not vanish")));
        }
    }
    Ok(())
}

/// Fit `κ = (c₂/6)/(S/12)` from both quartics of two-sided walker metrics and check that it is
/// the same at every point, on every instance and on both sides.
pub fn calibrate_kappa(instances: &[MetricSpec], points: &[Point]) -> Result<CalibrationConstant> {
    if instances.is_empty() || points.is_empty() {
        return Err(Error::Calibration("no calibration instances or points".into()));
    }
    let mut ratios = Vec::new();
    let mut side_gap = 0.0f64;
    for spec in instances {
        check_two_sided(spec)?;
        let tet = walker_tetrad(spec)?;
        for p in points {
            let curv = curvature(&metric_jet(spec, p, 2)?);
            let s = curv.scalar();
            if s.abs() <= 1e-6 * curv.scale().max(1e-30) {
                continue;
            }
            let tp = tet.at(p)?;
            let asd = weyl_quartic(&curv, &tp, Side::ASD).coeffs[2] / 6.0 / (s / 12.0);
            let sd = weyl_quartic(&curv, &tp, Side::SD).coeffs[2] / 6.0 / (s / 12.0);
            side_gap = side_gap.max((asd - sd).abs() / asd.abs().max(1e-300));
            ratios.push(asd);
            ratios.push(sd);
        }
    }
    if ratios.is_empty() {
        return Err(Error::Calibration("scalar curvature vanishes at every calibration point".into()));
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    let spread = var.sqrt() / mean.abs().max(1e-300);
    if !(spread < 1e-6) || mean == 0.0 {
        return Err(Error::Calibration(format!("ratio is not constant: mean {mean:e}, relative spread {spread:e}")));
    }
    Ok(CalibrationConstant {
        kappa: mean,
        spread,
        samples: ratios.len(),
        side_gap,
        instances: instances.iter().map(describe).collect(),
    })
}

fn describe(spec: &MetricSpec) -> String {
    match spec.walker_parts() {
        Some((a, b, c)) => format!("walker(a = {a}, b = {b}, c = {c})"),
        None => "general".into(),
    }
}

/// The three built-in two-sided instances used for calibration.
pub fn calibration_instances() -> Vec<MetricSpec> {
    [("u^2", "v^2", "u"), ("u^2", "v^2", "0"), ("(1 + x^2)*u^2", "v^2 + u*v*y", "u*y")]
        .iter()
        .map(|(a, b, c)| MetricSpec::walker(parse_expr(a).unwrap(), parse_expr(b).unwrap(), parse_expr(c).unwrap()))
        .collect()
}

/// Calibration on the built-in instances at 10 seeded points, computed once per process.
pub fn default_calibration() -> Result<&'static CalibrationConstant> {
    static CAL: OnceLock<Result<CalibrationConstant>> = OnceLock::new();
    CAL.get_or_init(|| calibrate_kappa(&calibration_instances(), &sample_unit_box(0x5eed, 10)))
        .as_ref()
        .map_err(Clone::clone)
}
