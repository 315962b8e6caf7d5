// Find the conformal factor that turns an integrable sesqui-Walker metric with
// c_uv = c_vv = 0 into a two-sided one.

use nullplane::exprkit::parse_expr;
use nullplane::families::{conformal_two_sided_factor, mk_walker};
use nullplane::lab::{run_analysis, AnalysisConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let inst = mk_walker(parse_expr("u^2 + x")?, parse_expr("v^2*y + u*x")?, parse_expr("v*x*y + u")?);
    let factor = conformal_two_sided_factor(&inst)?;
    println!("f = {}, chi = {}, exponent sign {}", factor.f, factor.chi, factor.exponent_sign);
    let rescaled = factor.apply(&inst)?;
    let mut cfg = AnalysisConfig::for_instance(&rescaled);
    cfg.points = 6;
    let r = run_analysis(&cfg)?;
    println!(
        "after rescaling: Z parallel {:.1e}, W parallel {:.1e}, two_sided {}",
        r.summary.max_z_parallel.unwrap_or(f64::NAN),
        r.summary.max_w_parallel.unwrap_or(f64::NAN),
        r.flags.two_sided
    );

    let blocked = mk_walker(parse_expr("u^2")?, parse_expr("v^2")?, parse_expr("u*v")?);
    if let Err(e) = conformal_two_sided_factor(&blocked) {
        println!("c = uv: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
