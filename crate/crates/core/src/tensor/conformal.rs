use super::metric::MetricSpec;
use crate::exprkit::Expr;

/// The metric `χ² g` as a general-kind spec.
pub fn conformal_rescale(spec: &MetricSpec, chi: &Expr) -> MetricSpec {
    let chi2 = Expr::pow(chi.clone(), 2);
    MetricSpec::general(spec.components().map(|row| row.map(|e| Expr::mul(chi2.clone(), e))))
}
