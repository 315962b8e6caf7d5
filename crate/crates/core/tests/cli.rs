use std::io::Write;

use nullplane::lab::{cli_main, Report};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli_main(std::iter::once("nullplane").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn spec_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("nullplane-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

const TWO_SIDED: &str = "[metric]\nkind = walker\na = u^2\nb = v^2\nc = u\n";

#[test]
fn analyze_prints_a_json_report() {
    let path = spec_file("m.ini", TWO_SIDED);
    let (code, out, err) = run(&["analyze", "--spec", path.to_str().unwrap(), "--points", "20", "--seed", "42", "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let report = Report::from_json(&out).unwrap();
    assert_eq!(report.points.len(), 20);
    assert!(report.flags.two_sided && report.flags.obstruction_zero);
    assert_eq!(report.verdict.value.as_str(), "yes");
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let path = spec_file("det.ini", TWO_SIDED);
    let args = ["analyze", "--spec", path.to_str().unwrap(), "--points", "12", "--seed", "5"];
    let first = run(&args);
    assert_eq!(first.0, 0);
    assert_eq!(first.1, run(&args).1);
    let fam = ["family", "--name", "sd2015", "--seed", "7", "--degree", "2", "--points", "6"];
    assert_eq!(run(&fam).1, run(&fam).1);
}

#[test]
fn cp_family_gives_a_dual_report() {
    let (code, out, err) = run(&["family", "--name", "cp", "--F", "x*y", "--points", "10"]);
    assert_eq!(code, 0, "{err}");
    let reports: Vec<Report> = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r.verdict.value.as_str() == "no:H"));
    assert_eq!(reports[1].config.kind, "conformal_walker");
}

#[test]
fn bad_spec_exits_2_with_diagnostics() {
    let path = spec_file("bad.ini", "[metric]\nkind = walker\na = u^^2\nb = 0\nc = 0\n");
    let (code, _, err) = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("a = u^^2") && err.contains("byte 2"), "{err}");

    let path = spec_file("unknown.ini", "[metric]\nkind = walker\na = u\nb = w\nc = 0\n");
    let (code, _, err) = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("`w`"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).0, 2);
    assert_eq!(run(&["analyze"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["family", "--name", "walker", "--degree", "9"]).0, 2);
    assert_eq!(run(&["family", "--name", "nope"]).0, 2);
    let path = spec_file("box.ini", TWO_SIDED);
    assert_eq!(run(&["analyze", "--spec", path.to_str().unwrap(), "--box", "1 0"]).0, 2);
    assert_eq!(run(&["analyze", "--spec", "/nonexistent/m.ini"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn excluded_locus_inside_the_box_is_rejected() {
    let (code, _, err) = run(&["family", "--name", "cp", "--F", "0", "--box", "-1 1"]);
    assert_eq!(code, 2);
    assert!(err.contains("v=0"), "{err}");
}

#[test]
fn analysis_errors_exit_1() {
    // half the default box has u < 1
    let path = spec_file("ln.ini", "[metric]\nkind = walker\na = ln(u - 1)\nb = 0\nc = 0\n");
    let (code, _, err) = run(&["analyze", "--spec", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{err}");
    assert!(err.contains("domain error"), "{err}");
}

#[test]
fn text_format_and_spec_emission() {
    let (code, out, _) = run(&["family", "--name", "two_sided", "--seed", "3", "--points", "4", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: yes"));
    let (code, spec, _) = run(&["family", "--name", "two_sided", "--seed", "3", "--emit-spec"]);
    assert_eq!(code, 0);
    let path = spec_file("emitted.ini", &spec);
    let (code, out, _) = run(&["analyze", "--spec", path.to_str().unwrap(), "--points", "4", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(out.contains("verdict: yes"));
}

#[test]
fn selftest_mutations_fail() {
    let (code, out, _) = run(&["selftest", "--mutate", "sd-c"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l.starts_with("FAIL  7")), "{out}");

    let (code, out, _) = run(&["selftest", "--mutate", "no-calibration", "--format", "json"]);
    assert_eq!(code, 1);
    let summary: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(summary["failed"].as_u64().unwrap() > 0);
    assert!(out.contains("calibration failed"), "{out}");
}
