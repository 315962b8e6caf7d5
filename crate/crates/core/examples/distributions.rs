// The null distributions of a Walker metric and their integrability residuals.

use nullplane::exprkit::Point;
use nullplane::frames::{
    dist_d, dist_h, dist_z, frobenius_residual, parallel_residual, walker_tetrad, beta_dist, ProjParam,
};
use nullplane::tensor::MetricSpec;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Point::new(0.8, 1.2, 0.4, 1.0);
    let t = ProjParam::fixed(0.0, 1.0);
    for (label, spec) in [
        ("two-sided", MetricSpec::parse_walker("u^2 + x*y", "v^2*x", "u*y")?),
        ("sesqui only", MetricSpec::parse_walker("u*x", "v*y", "v*x")?),
        ("generic", MetricSpec::parse_walker("v^2 + u", "u*v", "v*y")?),
    ] {
        let tet = walker_tetrad(&spec)?;
        let w = beta_dist(&t, &tet);
        println!("{label}");
        println!("  Z parallel      {:.2e}", parallel_residual(&spec, &dist_z(&tet), &p)?);
        println!("  W(0:1) frob     {:.2e}", frobenius_residual(&w, &p)?);
        println!("  W(0:1) parallel {:.2e}", parallel_residual(&spec, &w, &p)?);
        println!("  D parallel      {:.2e}", parallel_residual(&spec, &dist_d(&t, &tet), &p)?);
        println!("  H frobenius     {:.2e}", frobenius_residual(&dist_h(&t, &tet), &p)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
