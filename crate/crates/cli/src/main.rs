use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use env_logger::Env;

use wnet_cli::config::{Analysis, FileConfig, PipelineArgs};
use wnet_cli::{compare_views, run_pipeline_with, CliError, LabelThresholds, ReportBundle};

#[derive(Parser)]
#[command(name = "wnet", version, about = "Binary vs weighted analysis of yearly trade networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build per-year networks; writes symmetry indices and normalized matrices.
    Build(PipelineArgs),
    /// Node statistics and their moments.
    Stats(PipelineArgs),
    /// Correlations, densities, rank-size curves and tail fits.
    Analyze(PipelineArgs),
    /// Summarize an existing bundle's correlations into the BNA/WNA table.
    Report {
        /// Bundle directory written by a previous run.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.7)]
        strong: f64,
        #[arg(long, default_value_t = 0.3)]
        moderate: f64,
    },
    /// Every analysis plus the comparison table.
    All(PipelineArgs),
}

fn pipeline(args: &PipelineArgs, defaults: &[Analysis], dump: bool, compare: bool) -> Result<(), CliError> {
    let file = match &args.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cfg = args.resolve(file, defaults, dump)?;
    let bundle = run_pipeline_with(&cfg, compare)?;
    if !bundle.manifest.skipped.is_empty() {
        eprintln!("{} analysis item(s) skipped; see manifest.json", bundle.manifest.skipped.len());
    }
    println!("{}", cfg.out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    use Analysis::*;
    match cli.command {
        Command::Build(a) => pipeline(&a, &[Symmetry], true, false),
        Command::Stats(a) => pipeline(&a, &[Stats, Moments], false, false),
        Command::Analyze(a) => pipeline(&a, &[Correlations, Density, Ranksize, Tailfit], false, false),
        Command::All(a) => pipeline(&a, &Analysis::ALL, false, true),
        Command::Report { out, strong, moderate } => {
            if !(0.0 < moderate && moderate < strong && strong <= 1.0) {
                return Err(CliError::Validation(format!(
                    "label thresholds need 0 < moderate ({moderate}) < strong ({strong}) <= 1"
                )));
            }
            let mut bundle = ReportBundle::load(&out)?;
            let table = compare_views(&bundle, LabelThresholds { strong, moderate })?;
            print!("{table}");
            bundle.add_file("comparison.csv", &table.to_csv())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(Env::new().filter_or("WNET_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are validation errors (1); --help/--version exit 0.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
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
