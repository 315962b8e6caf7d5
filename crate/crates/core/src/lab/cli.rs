//! Command-line front end. Exit codes: 0 success, 1 analysis failure or failed
//! criterion, 2 usage error or unreadable spec.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::acceptance::{run_acceptance, AcceptanceOptions, Mutation};
use super::analyze::run_analyses;
use super::config::{AnalysisConfig, Explicit, OutputFormat, SpecSource};
use super::report::Report;
use super::spec_file::parse_box;
use crate::error::Error;
use crate::frames::ProjParam;

#[derive(Parser, Debug)]
#[command(name = "nullplane", version, about = "Walker metrics: curvature, Weyl quartics and null plane distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze the metric in a spec file.
    Analyze {
        #[arg(long)]
        spec: PathBuf,
        /// Seed for the sample points.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Build a family member and analyze it.
    Family {
        #[arg(long)]
        name: String,
        /// Seed for the random coefficients.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seed for the sample points.
        #[arg(long)]
        sample_seed: Option<u64>,
        /// Polynomial degree of the random coefficients (at most 4).
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// The free function F(x, y) of the cp family.
        #[arg(long = "F")]
        f: Option<String>,
        /// Print the instance as a spec file instead of analyzing it.
        #[arg(long)]
        emit_spec: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, value_enum)]
        mutate: Option<MutateArg>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    points: Option<usize>,
    /// Sample box: `lo hi` for every coordinate, or eight numbers in u v x y order.
    #[arg(long = "box", allow_hyphen_values = true)]
    sample_box: Option<String>,
    /// β-plane field (t0 : t1), overriding the spec's own.
    #[arg(long, requires = "t1", allow_hyphen_values = true)]
    t0: Option<String>,
    #[arg(long, requires = "t0", allow_hyphen_values = true)]
    t1: Option<String>,
    #[arg(long, default_value_t = 3)]
    jet_order: usize,
    #[arg(long, default_value_t = 1e-7)]
    zero_tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    nonzero_tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FormatArg {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MutateArg {
    SdC,
    NoCalibration,
}

fn is_input_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::Syntax { .. } | Error::UnknownIdentifier { .. })
}

fn configure(source: SpecSource, seed: Option<u64>, c: &Common) -> Result<(AnalysisConfig, Explicit), Error> {
    let mut cfg = AnalysisConfig::new(source);
    let mut explicit = Explicit::default();
    if let Some(n) = c.points {
        cfg.points = n;
        explicit.points = true;
    }
    if let Some(s) = seed {
        cfg.seed = s;
        explicit.seed = true;
    }
    if let Some(text) = &c.sample_box {
        (cfg.lo, cfg.hi) = parse_box(text)?;
        explicit.domain = true;
    }
    if let (Some(t0), Some(t1)) = (&c.t0, &c.t1) {
        cfg.t_field = Some(ProjParam::parse(t0, t1)?);
    }
    cfg.jet_order = c.jet_order;
    cfg.zero_tol = c.zero_tol;
    cfg.nonzero_tol = c.nonzero_tol;
    cfg.format = match c.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Text => OutputFormat::Text,
    };
    Ok((cfg, explicit))
}

fn render(reports: &[Report], format: OutputFormat) -> String {
    match (format, reports) {
        (OutputFormat::Json, [one]) => one.to_json(),
        (OutputFormat::Json, many) => serde_json::to_string_pretty(many).expect("reports serialize"),
        (OutputFormat::Text, many) => many.iter().map(Report::to_text).collect::<Vec<_>>().join("\n"),
    }
}

fn analyze(source: SpecSource, seed: Option<u64>, common: &Common, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = configure(source, seed, common).and_then(|(cfg, explicit)| Ok((run_analyses(&cfg, explicit)?, cfg.format)));
    match result {
        Ok((reports, format)) => {
            let _ = writeln!(out, "{}", render(&reports, format));
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_input_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn emit_spec(name: &str, seed: u64, degree: usize, f: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let built = if name == "cp" {
        let parsed = match f {
            Some(text) => crate::exprkit::parse_expr(text).map(Some),
            None => Ok(None),
        };
        parsed.and_then(|f| {
            let f = match f {
                Some(f) => f,
                None => crate::families::random_instance("cp", seed, degree)?.provenance.coefficients[0].1.clone(),
            };
            let (g, _, t) = crate::families::mk_cp_example(f)?;
            Ok(crate::lab::to_spec_text(&g.spec, Some(&t), &g.exclude))
        })
    } else {
        crate::families::random_instance(name, seed, degree)
            .map(|inst| crate::lab::to_spec_text(&inst.spec, Some(&inst.t_field), &inst.exclude))
    };
    match built {
        Ok(text) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if is_input_error(&e) {
                2
            } else {
                1
            }
        }
    }
}

fn selftest(mutate: Option<MutateArg>, format: FormatArg, out: &mut dyn Write) -> i32 {
    let opts = AcceptanceOptions {
        mutation: mutate.map(|m| match m {
            MutateArg::SdC => Mutation::SdC,
            MutateArg::NoCalibration => Mutation::NoCalibration,
        }),
        ..AcceptanceOptions::default()
    };
    let results = run_acceptance(&opts);
    let failed = results.iter().filter(|r| !r.passed).count();
    match format {
        FormatArg::Text => {
            for r in &results {
                let _ = writeln!(out, "{}", r.line());
            }
            let _ = writeln!(out, "{} passed, {} failed", results.len() - failed, failed);
        }
        FormatArg::Json => {
            let summary = serde_json::json!({
                "passed": results.len() - failed,
                "failed": failed,
                "criteria": results,
            });
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&summary).expect("results serialize"));
        }
    }
    i32::from(failed > 0)
}

/// Run the CLI on `args` (including the program name), writing to the given streams.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match cli.command {
        Command::Analyze { spec, seed, common } => analyze(SpecSource::File(spec), seed, &common, out, err),
        Command::Family { name, seed, degree, f, emit_spec: true, .. } => {
            emit_spec(&name, seed, degree, f.as_deref(), out, err)
        }
        Command::Family { name, seed, sample_seed, degree, f, common, .. } => {
            analyze(SpecSource::Family { name, seed, degree, f }, sample_seed, &common, out, err)
        }
        Command::Selftest { mutate, format } => selftest(mutate, format, out),
    }
}
