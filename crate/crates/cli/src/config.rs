//! Pipeline configuration: command-line flags layered over an optional TOML file.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use wnet::distributions::{DEFAULT_CI_LEVEL, DEFAULT_TAIL_FRACTION};
use wnet::graph::{WeightScheme, WeightVariant};
use wnet::ingest::Year;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Stats,
    Moments,
    Correlations,
    Density,
    Ranksize,
    Tailfit,
    Symmetry,
}

impl Analysis {
    pub const ALL: [Analysis; 7] = [
        Self::Stats,
        Self::Moments,
        Self::Correlations,
        Self::Density,
        Self::Ranksize,
        Self::Tailfit,
        Self::Symmetry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Stats => "stats",
            Self::Moments => "moments",
            Self::Correlations => "correlations",
            Self::Density => "density",
            Self::Ranksize => "ranksize",
            Self::Tailfit => "tailfit",
            Self::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Analysis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s.trim())
            .ok_or_else(|| CliError::Validation(format!("unknown analysis `{s}`")))
    }
}

/// Which years to process.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum YearSelection {
    /// Every year present in the flow data.
    All,
    /// Inclusive range.
    Range(Year, Year),
    List(Vec<Year>),
}

impl FromStr for YearSelection {
    type Err = CliError;

    /// `A:B` (inclusive), `A,B,C`, or a single year.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CliError::Validation(format!("invalid year selection `{s}`"));
        let s = s.trim();
        if s.is_empty() {
            return Err(CliError::Validation("year selection is empty".into()));
        }
        if let Some((a, b)) = s.split_once(':') {
            let (a, b): (Year, Year) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            return Ok(Self::Range(a, b));
        }
        let years = s
            .split(',')
            .map(|t| t.trim().parse::<Year>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::List(years))
    }
}

impl YearSelection {
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            Self::Range(a, b) if a > b => Err(CliError::Validation(format!("empty year range {a}:{b}"))),
            Self::List(v) if v.is_empty() => Err(CliError::Validation("year list is empty".into())),
            _ => Ok(()),
        }
    }

    /// Resolves against the years available in the panel, in ascending order.
    pub fn resolve(&self, available: &[Year]) -> Result<Vec<Year>, CliError> {
        let wanted: BTreeSet<Year> = match self {
            Self::All => available.iter().copied().collect(),
            Self::Range(a, b) => (*a..=*b).collect(),
            Self::List(v) => v.iter().copied().collect(),
        };
        if let Some(missing) = wanted.iter().find(|y| !available.contains(y)) {
            return Err(CliError::Data(format!("year {missing} not present in the flow data")));
        }
        if wanted.is_empty() {
            return Err(CliError::Data("no years to process".into()));
        }
        Ok(wanted.into_iter().collect())
    }
}

impl fmt::Display for YearSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::All => f.write_str("all"),
            Self::Range(a, b) => write!(f, "{a}:{b}"),
            Self::List(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub flows: PathBuf,
    pub gdp: Option<PathBuf>,
    pub scheme: WeightScheme,
    pub years: YearSelection,
    pub analyses: BTreeSet<Analysis>,
    pub out: PathBuf,
    pub ci_level: f64,
    pub tail_fraction: f64,
    pub bandwidth: Option<f64>,
    pub jobs: usize,
    pub dump_matrices: bool,
    /// `|r|` at or above which a correlation is labelled strong.
    pub strong: f64,
    /// `|r|` at or above which a correlation is labelled moderate.
    pub moderate: f64,
}

impl PipelineConfig {
    pub fn new(flows: impl Into<PathBuf>, gdp: Option<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            flows: flows.into(),
            gdp,
            scheme: WeightScheme::default(),
            years: YearSelection::All,
            analyses: Analysis::ALL.into_iter().collect(),
            out: out.into(),
            ci_level: DEFAULT_CI_LEVEL,
            tail_fraction: DEFAULT_TAIL_FRACTION,
            bandwidth: None,
            jobs: 0,
            dump_matrices: false,
            strong: 0.7,
            moderate: 0.3,
        }
    }

    /// Checks everything that can be checked without touching the filesystem.
    pub fn validate(&self) -> Result<(), CliError> {
        self.years.validate()?;
        if self.analyses.is_empty() && !self.dump_matrices {
            return Err(CliError::Validation("no analyses selected".into()));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(CliError::Validation(format!("CI level {} outside (0, 1)", self.ci_level)));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return Err(CliError::Validation(format!(
                "tail fraction {} outside (0, 1)",
                self.tail_fraction
            )));
        }
        if let Some(h) = self.bandwidth {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Validation(format!("bandwidth {h} must be positive")));
            }
        }
        if !(0.0 < self.moderate && self.moderate < self.strong && self.strong <= 1.0) {
            return Err(CliError::Validation(format!(
                "label thresholds need 0 < moderate ({}) < strong ({}) <= 1",
                self.moderate, self.strong
            )));
        }
        if self.scheme.variant().needs_gdp() && self.gdp.is_none() {
            return Err(CliError::Validation(format!(
                "scheme {} divides by GDP; pass --gdp",
                self.scheme.variant()
            )));
        }
        Ok(())
    }
}

/// Flags shared by every pipeline subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct PipelineArgs {
    /// Bilateral flow CSV (`year,exporter,importer,value`).
    #[arg(long)]
    pub flows: Option<PathBuf>,
    /// Country size CSV (`year,country,gdp`); optional under `--scheme raw`.
    #[arg(long)]
    pub gdp: Option<PathBuf>,
    /// exporter-gdp, importer-gdp or raw.
    #[arg(long)]
    pub scheme: Option<String>,
    /// Minimum flow for a link to exist (strict).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Inclusive range `A:B` or comma list; defaults to every year in the data.
    #[arg(long)]
    pub years: Option<String>,
    /// Comma list of: stats, moments, correlations, density, ranksize, tailfit, symmetry.
    #[arg(long)]
    pub analyses: Option<String>,
    #[arg(long = "ci-level")]
    pub ci_level: Option<f64>,
    #[arg(long = "tail-fraction")]
    pub tail_fraction: Option<f64>,
    /// KDE bandwidth override (default: Silverman's rule).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Worker threads for per-year processing (0 = all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Also write each year's normalized weight matrix.
    #[arg(long = "dump-matrices")]
    pub dump_matrices: bool,
    /// Output directory for the report bundle.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub strong: Option<f64>,
    #[arg(long)]
    pub moderate: Option<f64>,
}

/// On-disk configuration file. Keys mirror the long flags with `_` for `-`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub flows: Option<PathBuf>,
    pub gdp: Option<PathBuf>,
    pub scheme: Option<String>,
    pub threshold: Option<f64>,
    pub years: Option<String>,
    pub analyses: Option<Vec<String>>,
    pub ci_level: Option<f64>,
    pub tail_fraction: Option<f64>,
    pub bandwidth: Option<f64>,
    pub jobs: Option<usize>,
    pub dump_matrices: Option<bool>,
    pub out: Option<PathBuf>,
    pub strong: Option<f64>,
    pub moderate: Option<f64>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

pub fn parse_analyses<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<BTreeSet<Analysis>, CliError> {
    items
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

impl PipelineArgs {
    /// Merges flags over `file`, falling back to `default_analyses` when
    /// neither names any.
    pub fn resolve(
        &self,
        file: FileConfig,
        default_analyses: &[Analysis],
        default_dump: bool,
    ) -> Result<PipelineConfig, CliError> {
        let flows = self
            .flows
            .clone()
            .or(file.flows)
            .ok_or_else(|| CliError::Validation("--flows is required".into()))?;
        let out = self
            .out
            .clone()
            .or(file.out)
            .ok_or_else(|| CliError::Validation("--out is required".into()))?;
        let mut cfg = PipelineConfig::new(flows, self.gdp.clone().or(file.gdp), out);

        let variant = match self.scheme.as_deref().or(file.scheme.as_deref()) {
            Some(s) => s.parse::<WeightVariant>().map_err(CliError::Validation)?,
            None => WeightVariant::ExporterGdp,
        };
        let threshold = self.threshold.or(file.threshold).unwrap_or(0.0);
        cfg.scheme = WeightScheme::new(variant, threshold).map_err(|e| CliError::Validation(e.to_string()))?;

        if let Some(y) = self.years.as_deref().or(file.years.as_deref()) {
            cfg.years = y.parse()?;
        }
        cfg.analyses = match (&self.analyses, &file.analyses) {
            (Some(list), _) => parse_analyses(list.split(','))?,
            (None, Some(list)) => parse_analyses(list.iter().map(String::as_str))?,
            (None, None) => default_analyses.iter().copied().collect(),
        };
        if let Some(v) = self.ci_level.or(file.ci_level) {
            cfg.ci_level = v;
        }
        if let Some(v) = self.tail_fraction.or(file.tail_fraction) {
            cfg.tail_fraction = v;
        }
        cfg.bandwidth = self.bandwidth.or(file.bandwidth);
        cfg.jobs = self.jobs.or(file.jobs).unwrap_or(0);
        cfg.dump_matrices = self.dump_matrices || file.dump_matrices.unwrap_or(default_dump);
        if let Some(v) = self.strong.or(file.strong) {
            cfg.strong = v;
        }
        if let Some(v) = self.moderate.or(file.moderate) {
            cfg.moderate = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
