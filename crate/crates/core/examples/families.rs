// Build a member of every named family and check that its tags hold.

use nullplane::families::{random_instance, FAMILY_NAMES};
use nullplane::lab::{run_analysis, AnalysisConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in FAMILY_NAMES {
        let inst = random_instance(name, 7, 2)?;
        let mut cfg = AnalysisConfig::for_instance(&inst);
        cfg.points = 5;
        let report = run_analysis(&cfg)?;
        let tags: Vec<String> =
            report.expectations.iter().map(|e| format!("{}{}", e.tag, if e.holds { "" } else { "(!)" })).collect();
        println!("{name:<17} verdict {:<15} {}", report.verdict.value.as_str(), tags.join(" "));
        assert!(report.expectations.iter().all(|e| e.holds), "{name}: {tags:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
