// Self-dual and anti-self-dual Weyl quartics in the Walker tetrad, with their root
// structures.

use nullplane::exprkit::Point;
use nullplane::frames::walker_tetrad;
use nullplane::tensor::{curvature, metric_jet, MetricSpec};
use nullplane::weylalg::{default_calibration, root_structure, weyl_quartics};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cal = default_calibration()?;
    println!("kappa = {:.12} (spread {:.1e})", cal.kappa, cal.spread);
    let p = Point::new(0.9, 1.3, 0.6, 1.1);
    for (label, spec) in [
        ("walker", MetricSpec::parse_walker("v^2*x + u", "u^2*y + v*x", "u*v*y")?),
        ("two-sided", MetricSpec::parse_walker("u^2", "v^2", "u")?),
    ] {
        let curv = curvature(&metric_jet(&spec, &p, 2)?);
        let (sd, asd) = weyl_quartics(&curv, &walker_tetrad(&spec)?.at(&p)?);
        for q in [&sd, &asd] {
            let roots = root_structure(q, 1e-7);
            println!("{label:>10} {:<3} coeffs {:+.4?}  type {}", q.side.name(), q.coeffs, roots.annotated());
        }
        println!("{label:>10} psi2 = {:+.6}, S/12 = {:+.6}", asd.coeffs[2] / (6.0 * cal.kappa), curv.scalar() / 12.0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
