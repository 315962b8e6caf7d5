// Analyze a metric given as spec-file text and print the JSON report.

use nullplane::lab::{run_analysis, AnalysisConfig, SpecSource};

const SPEC: &str = "\
[metric]
kind = walker
a = u^2
b = v^2
c = u

[lambda]
t0 = 0
t1 = 1

[domain]
box = 0.5 1.5
points = 4
seed = 11
";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_analysis(&AnalysisConfig::new(SpecSource::Text(SPEC.into())))?;
    println!("{}", report.to_json());
    assert!(report.flags.two_sided && report.flags.obstruction_zero);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
