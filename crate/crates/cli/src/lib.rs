//! Command-line front end: problem ingestion, validation, dispatch, and
//! reports.
//!
//! Exit codes: 0 = surjective (or success), 1 = not surjective (or
//! failures found), 2 = input error.

pub mod problem;
pub mod registry;
pub mod report;

use std::time::Instant;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand, ValueEnum};

use glocsur_core::localization::Side;
use glocsur_core::presets as core_presets;
use glocsur_core::selftest::{self, SelftestConfig};
use glocsur_core::PlaceKind;

use problem::{ProblemFile, SequenceFile};
use report::{CheckReport, RadicalPredictionOut, Report, SelftestOut, SixtermReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "glocsur",
    about = "Decides surjectivity of Galois-cohomology localization from finite combinatorial data",
    version
)]
pub struct Cli {
    /// Report format; falls back to the GLOCSUR_REPORT environment
    /// variable, then to text.
    #[arg(long, global = true, value_enum)]
    pub report: Option<ReportFormat>,

    /// Verify exactness of the six-term sequence and include the
    /// certificate in the report (sixterm command).
    #[arg(long, global = true)]
    pub verify_exactness: bool,

    /// Seed for the randomized self-test suites.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Cap on the group order when closing permutation generators.
    #[arg(long, global = true, default_value_t = glocsur_core::group::DEFAULT_ORDER_CAP)]
    pub max_group_order: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide surjectivity for a problem file.
    Check {
        /// Path to the JSON problem description.
        file: String,
    },
    /// Build the six-term exact sequence from a short-exact-sequence file.
    Sixterm {
        /// Path to the JSON sequence description.
        file: String,
    },
    /// List presets or emit a ready-to-run problem file.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
    /// Run the seeded randomized law suites.
    Selftest {
        /// Multiplies every suite's iteration count.
        #[arg(long, default_value_t = 1)]
        scale: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum PresetsAction {
    /// Show every preset with its parameter schema.
    List,
    /// Print the demo problem file for one preset.
    Emit {
        name: String,
        /// JSON object with the preset's parameters.
        #[arg(long, default_value = "null")]
        params: String,
    },
}

pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

pub fn resolve_format(cli: &Cli) -> ReportFormat {
    if let Some(f) = cli.report {
        return f;
    }
    match std::env::var("GLOCSUR_REPORT").ok().as_deref() {
        Some("json") => ReportFormat::Json,
        _ => ReportFormat::Text,
    }
}

/// Runs a parsed command line. `Err` means an input problem (exit 2).
pub fn run(cli: &Cli) -> Result<Outcome> {
    let started = Instant::now();
    let format = resolve_format(cli);
    match &cli.command {
        Command::Check { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| anyhow!("cannot read `{}`: {}", file, e))?;
            let parsed = ProblemFile::parse(&text)?;
            let loaded = parsed.load(cli.max_group_order)?;
            let verdict = loaded
                .problem
                .verdict()
                .map_err(|e| anyhow!("verdict: {}", e))?;
            let mut report = CheckReport::from_verdict(&verdict);
            if let Some(rad) = &loaded.radical {
                let mut predictions = Vec::new();
                for place in loaded.problem.places() {
                    if place.kind == PlaceKind::Finite
                        && loaded.problem.side_of(&place.id) == Some(Side::Complement)
                    {
                        let holds =
                            core_presets::radical_predicts_surjectivity(
                                rad,
                                &loaded.problem,
                                &place.id,
                            )
                            .map_err(|e| anyhow!("radical: {}", e))?;
                        predictions.push(RadicalPredictionOut {
                            place: place.id.clone(),
                            condition_holds: holds,
                        });
                    }
                }
                report.radical_predictions = Some(predictions);
            }
            let surjective = report.surjective;
            let rendered = render(Report::Check(report), format, started);
            Ok(Outcome {
                stdout: rendered,
                exit_code: if surjective { 0 } else { 1 },
            })
        }
        Command::Sixterm { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| anyhow!("cannot read `{}`: {}", file, e))?;
            let parsed = SequenceFile::parse(&text)?;
            let seq = parsed.load(cli.max_group_order)?;
            let st = seq.six_term().map_err(|e| anyhow!("six-term: {}", e))?;
            let exactness = cli.verify_exactness.then(|| st.verify_exactness());
            let all_exact = exactness.as_ref().map_or(true, |e| e.all_exact());
            let report = SixtermReport::from_six_term(&st, exactness.as_ref());
            let rendered = render(Report::Sixterm(report), format, started);
            Ok(Outcome {
                stdout: rendered,
                exit_code: if all_exact { 0 } else { 1 },
            })
        }
        Command::Presets { action } => match action {
            PresetsAction::List => {
                let mut out = String::new();
                match format {
                    ReportFormat::Json => {
                        let items: Vec<serde_json::Value> = registry::list()
                            .iter()
                            .map(|p| {
                                serde_json::json!({
                                    "name": p.name,
                                    "description": p.description,
                                    "params": serde_json::from_str::<serde_json::Value>(p.params)
                                        .expect("schema snippets are valid json"),
                                })
                            })
                            .collect();
                        out.push_str(&serde_json::to_string_pretty(&items).expect("serializes"));
                        out.push('\n');
                    }
                    ReportFormat::Text => {
                        for p in registry::list() {
                            out.push_str(&format!(
                                "{:<26} {}\n{:<26} params: {}\n",
                                p.name, p.description, "", p.params
                            ));
                        }
                    }
                }
                Ok(Outcome {
                    stdout: out,
                    exit_code: 0,
                })
            }
            PresetsAction::Emit { name, params } => {
                let params: serde_json::Value =
                    serde_json::from_str(params).map_err(|e| anyhow!("--params: {}", e))?;
                let file = registry::emit(name, &params)?;
                let mut out =
                    serde_json::to_string_pretty(&file).expect("problem file serializes");
                out.push('\n');
                Ok(Outcome {
                    stdout: out,
                    exit_code: 0,
                })
            }
        },
        Command::Selftest { scale } => {
            let cfg = SelftestConfig {
                seed: cli.seed,
                scale: *scale,
            };
            let result = selftest::run_all(&cfg);
            let all = result.all_passed();
            let report = SelftestOut::from_report(cfg.seed, cfg.scale, &result);
            let rendered = render(Report::Selftest(report), format, started);
            Ok(Outcome {
                stdout: rendered,
                exit_code: if all { 0 } else { 1 },
            })
        }
    }
}

fn render(report: Report, format: ReportFormat, started: Instant) -> String {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Text => report.to_text(started.elapsed().as_millis()),
    }
}
