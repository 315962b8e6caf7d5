//! Configuration, the analysis pipeline, reports, the acceptance suite and the CLI.

mod acceptance;
mod analyze;
mod cli;
mod config;
mod report;
mod spec_file;

pub use acceptance::{run_acceptance, AcceptanceOptions, CriterionResult, Mutation};
pub use analyze::{analyze_target, flags_from, run_analyses, run_analysis, thread_pool, verdict_from, THREADS_ENV};
pub use cli::cli_main;
pub use config::{resolve_targets, AnalysisConfig, AnalysisTarget, Explicit, OutputFormat, SpecSource};
pub use report::{
    ConfigEcho, Expectation, Flags, PointRecord, QuarticRecord, Report, Residuals, Summary, Verdict, VerdictKind,
    SCHEMA_VERSION,
};
pub use spec_file::{load_spec_file, parse_box, parse_exclude, parse_spec_file, to_spec_text, SpecFile};
