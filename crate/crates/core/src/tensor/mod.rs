//! Metric jets, Levi-Civita connection, curvature, Hodge duality and the
//! conformal wave operator.

mod conformal;
mod curvature;
mod derivs;
mod hodge;
mod metric;

pub use conformal::conformal_rescale;
pub use curvature::{christoffel, curvature, Connection, CurvaturePack, Tensor4};
pub use derivs::{box_scalar, covariant_derivative, covariant_derivative_jets, walker_box, walker_box_closed_form};
pub(crate) use derivs::jets_of;
pub use hodge::{volume_and_duals, wedge, weyl_split, DualOperator, WeylSplit};
pub use metric::{check_signature, metric_jet, MetricJet, MetricKind, MetricSpec};
