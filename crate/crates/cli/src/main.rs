//! `attrib`: identifiability games, tell-tale sets, probabilistic-language
//! checks, and ecosystem growth and compute-cost reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
//! 3 failed validation or check.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use attrib_core::growth::Window;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "attrib",
    version,
    about = "Identifiability games and model-ecosystem analytics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct (or check) tell-tale sets for a finite family.
    Telltale(TelltaleArgs),
    /// Run a learner against a fair presentation of one family member.
    Simulate(SimulateArgs),
    /// Run a learner against an adversarial teacher.
    Adversary(AdversaryArgs),
    /// Check normalization, supports and divergences of the P1/P2 pair.
    ProblangVerify(ProblangArgs),
    /// Hypothesis-space growth series and exponential fits.
    Growth(GrowthArgs),
    /// Brute-force inference compute budget.
    Compute(ComputeArgs),
    /// Write every chart, series and table to a directory.
    ReportAll(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LearnerChoice {
    FiniteClass,
    MinConsistent,
    MaxConsistent,
    Impatient(usize),
    PosteriorUniform,
    LikelihoodRatio,
}

impl FromStr for LearnerChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "finite-class" => Ok(Self::FiniteClass),
            "min-consistent" => Ok(Self::MinConsistent),
            "max-consistent" => Ok(Self::MaxConsistent),
            "posterior-uniform" => Ok(Self::PosteriorUniform),
            "likelihood-ratio" => Ok(Self::LikelihoodRatio),
            other => other
                .strip_prefix("impatient-")
                .and_then(|n| n.parse().ok())
                .map(Self::Impatient)
                .ok_or_else(|| {
                    format!(
                        "unknown learner {other:?}; expected finite-class, min-consistent, max-consistent, \
                         impatient-N, posterior-uniform or likelihood-ratio"
                    )
                }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ScheduleChoice {
    LengthLex,
    Shuffled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum AdversaryMode {
    Nested,
    Support,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum SupportOrder {
    Canonical,
    Interleaved,
}

#[derive(Debug, Args, Serialize)]
struct TelltaleArgs {
    /// Family document (JSON).
    #[arg(long)]
    family: PathBuf,
    /// Check these tell-tale sets instead of constructing them.
    #[arg(long)]
    check: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    #[arg(long)]
    family: PathBuf,
    /// Name of the target language.
    #[arg(long)]
    target: String,
    #[arg(long, default_value = "finite-class")]
    learner: LearnerChoice,
    #[arg(long, default_value_t = 100)]
    horizon: usize,
    #[arg(long, value_enum, default_value_t = ScheduleChoice::LengthLex)]
    schedule: ScheduleChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct AdversaryArgs {
    #[arg(long, value_enum)]
    mode: AdversaryMode,
    /// Defaults to min-consistent (nested) or posterior-uniform (support).
    #[arg(long)]
    learner: Option<LearnerChoice>,
    #[arg(long, default_value_t = 100)]
    horizon: usize,
    /// Number of finite thresholds in the nested family; defaults to the horizon.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = SupportOrder::Canonical)]
    order: SupportOrder,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ProblangArgs {
    #[arg(long, default_value_t = 60)]
    max_n: usize,
    /// Monte Carlo trials per sample size.
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,10,50,200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accuracy grid as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct SnapshotArgs {
    /// Ecosystem asset CSV, or a cached snapshot (`.json`).
    #[arg(long)]
    assets: PathBuf,
    /// Organization-to-region document; the bundled map is used otherwise.
    #[arg(long)]
    region_map: Option<PathBuf>,
    /// Column-name mapping document for the asset CSV.
    #[arg(long)]
    columns: Option<PathBuf>,
    /// Treat unknown access as closed or restricted.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    strict_access: bool,
    #[arg(long, default_value_t = Window::default())]
    window: Window,
}

#[derive(Debug, Args, Serialize)]
struct GrowthArgs {
    #[command(flatten)]
    #[serde(flatten)]
    snapshot: SnapshotArgs,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    k: u8,
    /// Series CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fit summary (JSON).
    #[arg(long)]
    fits: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Save the normalized snapshot (JSON).
    #[arg(long)]
    save_snapshot: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum PresetChoice {
    #[value(name = "paper-2025-single-item")]
    #[serde(rename = "paper-2025-single-item")]
    SingleItem,
    #[value(name = "paper-daily-sweep")]
    #[serde(rename = "paper-daily-sweep")]
    DailySweep,
    #[value(name = "paper-national-annual")]
    #[serde(rename = "paper-national-annual")]
    NationalAnnual,
}

#[derive(Debug, Args, Serialize)]
struct ComputeArgs {
    /// Scenario presets; all three when neither a preset nor --tokens is given.
    #[arg(long, value_enum)]
    preset: Vec<PresetChoice>,
    #[arg(long, default_value_t = attrib_core::cost::PARAMS_2025)]
    params: f64,
    /// Custom token count (instead of a preset).
    #[arg(long, conflicts_with = "preset")]
    tokens: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    flops_per_param_token: f64,
    #[arg(long, default_value_t = attrib_core::cost::REFERENCE_FLOPS)]
    machine_flops: f64,
    #[arg(long, default_value_t = attrib_core::cost::BYTES_PER_TOKEN)]
    bytes_per_token: f64,
    #[arg(long, default_value_t = attrib_core::cost::REFERENCE_IO)]
    io_rate: f64,
    /// Scenario table (CSV).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Text report; printed to standard output when omitted.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    snapshot: SnapshotArgs,
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Telltale(a) => commands::telltale(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Adversary(a) => commands::adversary(&a),
        Command::ProblangVerify(a) => commands::problang_verify(&a),
        Command::Growth(a) => commands::growth(&a),
        Command::Compute(a) => commands::compute(&a),
        Command::ReportAll(a) => commands::report_all(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("attrib: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
