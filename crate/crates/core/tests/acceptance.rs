use nullplane::lab::{run_acceptance, AcceptanceOptions};

fn main() {
    let results = run_acceptance(&AcceptanceOptions::default());
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
