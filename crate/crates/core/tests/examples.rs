//! Every cargo example runs to completion.

mod expressions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/expressions.rs"));
}
mod curvature {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/curvature.rs"));
}
mod distributions {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/distributions.rs"));
}
mod weyl_quartics {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weyl_quartics.rs"));
}
mod families {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/families.rs"));
}
mod cp_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cp_example.rs"));
}
mod conformal_factor {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/conformal_factor.rs"));
}
mod analyze_spec {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/analyze_spec.rs"));
}

#[test]
fn expressions_example_runs() {
    expressions::run_example().expect("expressions example");
}

#[test]
fn curvature_example_runs() {
    curvature::run_example().expect("curvature example");
}

#[test]
fn distributions_example_runs() {
    distributions::run_example().expect("distributions example");
}

#[test]
fn weyl_quartics_example_runs() {
    weyl_quartics::run_example().expect("weyl quartics example");
}

#[test]
fn families_example_runs() {
    families::run_example().expect("families example");
}

#[test]
fn cp_example_runs() {
    cp_example::run_example().expect("cp example");
}

#[test]
fn conformal_factor_example_runs() {
    conformal_factor::run_example().expect("conformal factor example");
}

#[test]
fn analyze_spec_example_runs() {
    analyze_spec::run_example().expect("analyze spec example");
}
