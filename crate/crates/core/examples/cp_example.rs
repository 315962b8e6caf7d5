// A sesqui-Walker metric whose conformal rescaling is Einstein with both Weyl
// quartics of type {4}, yet which is not conformally two-sided because H is not
// integrable.

use nullplane::exprkit::parse_expr;
use nullplane::families::mk_cp_example;
use nullplane::lab::{run_analysis, AnalysisConfig, VerdictKind};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (g, h, t) = mk_cp_example(parse_expr("x*y")?)?;
    let (a, b, c) = g.spec.walker_parts().expect("walker");
    println!("a = {a}\nb = {b}\nc = {c}\nbeta-plane field {t:?}");
    for inst in [&g, &h] {
        let mut cfg = AnalysisConfig::for_instance(inst);
        cfg.points = 8;
        let r = run_analysis(&cfg)?;
        println!(
            "{:<12} einstein {:.1e}  SD {:?}  ASD {:?}  H frobenius {:.2}  verdict {}",
            r.label,
            r.summary.max_einstein_residual,
            r.summary.sd_types,
            r.summary.asd_types,
            r.summary.max_h_frobenius.unwrap_or(f64::NAN),
            r.verdict.value.as_str()
        );
        assert_eq!(r.verdict.value, VerdictKind::NoH);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
