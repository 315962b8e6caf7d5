// Curvature of a Walker metric: the scalar against its closed form, Riemann symmetries
// and the Einstein residual.

use nullplane::exprkit::{parse_expr, sample_unit_box};
use nullplane::tensor::{curvature, metric_jet, MetricSpec};
use nullplane::weylalg::einstein_residual;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = MetricSpec::parse_walker("u^2*x + v*y", "v^2 - x*y", "u*v + x^2")?;
    // a_uu + b_vv + 2 c_uv
    let closed = parse_expr("2*x + 2 + 2")?;
    for p in sample_unit_box(7, 3) {
        let curv = curvature(&metric_jet(&spec, &p, 2)?);
        let r = curv.riemann();
        let antisym = (r.get(0, 1, 2, 3) + r.get(1, 0, 2, 3)).abs();
        let pair = (r.get(0, 1, 2, 3) - r.get(2, 3, 0, 1)).abs();
        let bianchi = (r.get(0, 1, 2, 3) + r.get(0, 2, 3, 1) + r.get(0, 3, 1, 2)).abs();
        println!(
            "p = {:?}\n  S = {:+.12} (closed form {:+.12})\n  symmetry gaps {antisym:.1e} {pair:.1e} {bianchi:.1e}\n  einstein residual {:.3}",
            p.0,
            curv.scalar(),
            nullplane::exprkit::eval(&closed, &p)?,
            einstein_residual(&curv)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
