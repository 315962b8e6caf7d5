//! Null tetrads, the α/β-plane families and their integrability residuals.

mod dist;
mod field;
mod tetrad;

pub use dist::{
    alpha_dist, autoparallel_residual, autoparallel_residual_with, beta_dist, dist_d, dist_h, dist_z,
    frobenius_residual, null_residual, off_span_norm, parallel_residual, parallel_residual_with, span_distance,
    Distribution, ProjParam,
};
pub use field::{lie_bracket, VectorField};
pub use tetrad::{walker_tetrad, Tetrad, TetradPoint};
