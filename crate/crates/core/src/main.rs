use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use kgc_study_kit::par::Execution;
use kgc_study_kit::pipeline::{
    grade_study, render_csv, render_markdown, run_analysis, score_study, synth_study, AnalysisConfig,
    Metric, PipelineError, SynthSpec,
};
use kgc_study_kit::study::{build_fixture_bundle, load_study, load_study_with_warnings, validate_anonymity, write_study};

/// Grade, score and analyse knowledge-graph-construction user studies.
#[derive(Parser)]
#[command(name = "kgc-study-kit", version)]
struct Cli {
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a study directory and report anonymity concerns.
    Validate {
        study: PathBuf,
        /// Treat warnings as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Grade every submission against its expected graph.
    Grade {
        study: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score the questionnaires.
    Score {
        study: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full analysis and write the report.
    Analyze {
        study: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// JSON report (stdout when no output is given).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        md: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write the five-task fixture bundle.
    Fixtures { out: PathBuf },
    /// Generate a synthetic study.
    Synth {
        #[arg(long, default_value_t = 2)]
        groups: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        /// Comma-separated `metric=d` shifts applied to every group after the first.
        #[arg(long, value_delimiter = ',')]
        effect: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_out(path: &Path, text: &str) -> Result<(), PipelineError> {
    let io = |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), PipelineError> {
    match out {
        Some(path) => write_out(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn parse_effects(items: &[String]) -> Result<BTreeMap<Metric, f64>, PipelineError> {
    let mut effects = BTreeMap::new();
    for item in items.iter().filter(|s| !s.trim().is_empty()) {
        let bad = || PipelineError::InvalidEffectSize(format!("expected metric=d, got {item:?}"));
        let (name, d) = item.split_once('=').ok_or_else(bad)?;
        let metric = Metric::parse(name).ok_or_else(|| PipelineError::InvalidEffectSize(format!("unknown metric {name:?}")))?;
        let d: f64 = d.trim().parse().map_err(|_| bad())?;
        effects.insert(metric, d);
    }
    Ok(effects)
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Validate { study, strict } => {
            let (ds, mut warnings) = load_study_with_warnings(&study)?;
            warnings.extend(validate_anonymity(&ds).iter().map(ToString::to_string));
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "{}: {} participants in {} groups, {} warnings",
                ds.study_id,
                ds.participants.len(),
                ds.groups.len(),
                warnings.len()
            );
            if strict && !warnings.is_empty() {
                return Err(PipelineError::InvalidConfig(format!(
                    "--strict: {} warnings",
                    warnings.len()
                )));
            }
        }
        Command::Grade { study, out } => {
            let ds = load_study(&study)?;
            emit(out.as_deref(), &json(&grade_study(&ds, exec)?))?;
        }
        Command::Score { study, out } => {
            let ds = load_study(&study)?;
            emit(out.as_deref(), &json(&score_study(&ds)?))?;
        }
        Command::Analyze {
            study,
            config,
            out,
            md,
            csv,
        } => {
            let cfg = match config {
                Some(path) => AnalysisConfig::load(&path)?,
                None => AnalysisConfig::default(),
            };
            let ds = load_study(&study)?;
            let report = run_analysis(&ds, &cfg, exec)?;
            if let Some(path) = &md {
                write_out(path, &render_markdown(&report))?;
            }
            if let Some(path) = &csv {
                write_out(path, &render_csv(&report))?;
            }
            if out.is_some() || (md.is_none() && csv.is_none()) {
                emit(out.as_deref(), &report.to_json())?;
            }
        }
        Command::Fixtures { out } => {
            let tasks = build_fixture_bundle(&out)?;
            println!("wrote {} task fixtures to {}", tasks.len(), out.display());
        }
        Command::Synth {
            groups,
            n,
            effect,
            seed,
            out,
        } => {
            let spec = SynthSpec {
                groups,
                participants_per_group: n,
                effects: parse_effects(&effect)?,
                seed,
            };
            let ds = synth_study(&spec)?;
            write_study(&ds, &out)?;
            println!("wrote {} participants to {}", ds.participants.len(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
