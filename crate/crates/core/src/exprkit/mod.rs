//! Scalar expressions in the coordinates `u, v, x, y`: parsing, symbolic
//! differentiation, exact jet evaluation and a finite-difference oracle.

mod ast;
mod diff;
mod eval;
mod fd;
mod jet;
mod normal;
mod parse;
mod random;
mod sample;

pub use ast::{Expr, Func, Point, Var};
pub use diff::{diff_expr, diff_multi};
pub use eval::{eval, eval_jet, POLE_GUARD};
pub use fd::fd_derivative;
pub use jet::{Jet, MultiIndex, MAX_ORDER};
pub use normal::{antideriv_poly, depends_on, is_zero, normalize, simplify, Poly};
pub use parse::parse_expr;
pub use random::random_expr;
pub use sample::{sample_points, sample_unit_box};
