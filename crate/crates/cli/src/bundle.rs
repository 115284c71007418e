//! Report bundle layout, manifest, and atomic writing.
//!
//! A bundle is a directory of plot-ready CSV files plus `manifest.json`,
//! which is the only file carrying run metadata. Data files contain no
//! timestamps, so identical inputs give byte-identical bundles.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use wnet::distributions::{Correlation, CorrelationPoint, StatPair};
use wnet::ingest::Year;
use wnet::CorrelationPoint64;

use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Software {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub flows: String,
    pub gdp: Option<String>,
    pub scheme: String,
    pub threshold: f64,
    pub years: String,
    pub analyses: Vec<String>,
    pub ci_level: f64,
    pub tail_fraction: f64,
    pub bandwidth: Option<f64>,
    pub dump_matrices: bool,
    pub strong: f64,
    pub moderate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct YearNormalizer {
    pub year: Year,
    pub normalizer: f64,
}

/// An analysis that was not produced because its input was too small or flat.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub analysis: String,
    pub year: Option<Year>,
    pub subject: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub software: Software,
    pub config: ConfigEcho,
    pub conventions: BTreeMap<String, String>,
    pub years: Vec<Year>,
    pub normalizers: Vec<YearNormalizer>,
    pub panel_warnings: Vec<String>,
    pub skipped: Vec<Skipped>,
    pub files: Vec<FileEntry>,
}

pub fn conventions() -> BTreeMap<String, String> {
    [
        ("moments", "population moments; kurtosis is the fourth standardized moment (not excess)"),
        ("undefined", "ANND/ANNS undefined at isolated nodes, BCC/WCC where degree < 2; left empty and excluded from moments and correlations"),
        ("normalization", "per-year: weights divided by that year's largest symmetrized weight (see normalizers)"),
        ("density", "Gaussian kernel; Silverman bandwidth 0.9*min(sd, IQR/1.34)*n^-0.2 unless overridden"),
        ("correlation", "Pearson r over jointly defined nodes; Fisher-z interval at ci_level"),
        ("tailfit", "log-normal mu/sigma by maximum likelihood on ln(x); Hill alpha over the top tail_fraction, x_min = (k+1)-th largest value"),
        ("zeros", "zero and undefined values dropped from rank-size and tail fits; counts in counts.csv"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_owned()))
    .collect()
}

/// In-memory bundle contents keyed by relative path.
#[derive(Debug, Default)]
pub struct BundleFiles {
    files: BTreeMap<String, Vec<u8>>,
}

impl BundleFiles {
    pub fn insert(&mut self, path: impl Into<String>, contents: Vec<u8>) {
        self.files.insert(path.into(), contents);
    }

    pub fn contains(&self, path: &str) -> bool {
        self.files.contains_key(path)
    }

    pub fn entries(&self) -> Vec<FileEntry> {
        self.files
            .iter()
            .map(|(path, bytes)| FileEntry {
                path: path.clone(),
                sha256: digest(bytes),
                bytes: bytes.len(),
            })
            .collect()
    }

    pub fn paths(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    /// Writes everything to a sibling staging directory, then swaps it into
    /// place. On failure the staging directory is removed and `out` is left
    /// as it was.
    pub fn write_atomically(&self, out: &Path, manifest: &Manifest) -> Result<(), CliError> {
        guard_existing(out)?;
        let staging = staging_path(out);
        if staging.exists() {
            fs::remove_dir_all(&staging)?;
        }
        let result = (|| -> Result<(), CliError> {
            for (rel, bytes) in &self.files {
                let path = staging.join(rel);
                if let Some(parent) = path.parent() {
                    fs::create_dir_all(parent)?;
                }
                fs::write(path, bytes)?;
            }
            fs::create_dir_all(&staging)?;
            fs::write(staging.join(MANIFEST), manifest_bytes(manifest)?)?;
            if out.exists() {
                fs::remove_dir_all(out)?;
            }
            fs::rename(&staging, out)?;
            Ok(())
        })();
        if result.is_err() && staging.exists() {
            let _ = fs::remove_dir_all(&staging);
        }
        result
    }
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_bytes(manifest: &Manifest) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(manifest)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn staging_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_else(|| "bundle".into());
    name.push(".partial");
    out.with_file_name(name)
}

/// Refuses to replace a non-empty directory that is not a previous bundle.
fn guard_existing(out: &Path) -> Result<(), CliError> {
    if !out.exists() {
        return Ok(());
    }
    if !out.is_dir() {
        return Err(CliError::Validation(format!("{} exists and is not a directory", out.display())));
    }
    let empty = fs::read_dir(out)?.next().is_none();
    if empty || out.join(MANIFEST).is_file() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} is not empty and holds no {MANIFEST}; refusing to overwrite",
            out.display()
        )))
    }
}

pub fn correlation_path(pair: StatPair) -> String {
    format!("correlations/{}.csv", pair.label())
}

pub fn correlation_csv(points: &[CorrelationPoint64]) -> Vec<u8> {
    let mut s = String::from("year,pair,r,ci_low,ci_high,n\n");
    for p in points {
        let c = &p.correlation;
        s.push_str(&format!("{},{},{},{},{},{}\n", p.year, p.pair, c.r, c.ci_low, c.ci_high, c.n));
    }
    s.into_bytes()
}

pub fn parse_correlation_csv(bytes: &[u8], pair: StatPair) -> Result<Vec<CorrelationPoint64>, CliError> {
    #[derive(Deserialize)]
    struct Row {
        year: Year,
        pair: String,
        r: f64,
        ci_low: f64,
        ci_high: f64,
        n: usize,
    }
    let mut rdr = csv::Reader::from_reader(bytes);
    let mut out = Vec::new();
    for row in rdr.deserialize::<Row>() {
        let row = row.map_err(|e| CliError::Data(format!("{}: {e}", correlation_path(pair))))?;
        if row.pair != pair.label() {
            return Err(CliError::Data(format!(
                "{} holds pair {} rather than {pair}",
                correlation_path(pair),
                row.pair
            )));
        }
        out.push(CorrelationPoint {
            year: row.year,
            pair,
            correlation: Correlation {
                r: row.r,
                ci_low: row.ci_low,
                ci_high: row.ci_high,
                n: row.n,
            },
        });
    }
    Ok(out)
}

/// A bundle on disk (or just written), with its correlation series loaded.
#[derive(Clone, Debug)]
pub struct ReportBundle {
    pub root: PathBuf,
    pub manifest: Manifest,
    pub series: BTreeMap<StatPair, Vec<CorrelationPoint64>>,
}

impl ReportBundle {
    /// Reads `manifest.json`, verifies every listed digest, and loads the
    /// correlation series that are present.
    pub fn load(root: &Path) -> Result<Self, CliError> {
        let text = fs::read(root.join(MANIFEST))
            .map_err(|e| CliError::Data(format!("{}: {e}", root.join(MANIFEST).display())))?;
        let manifest: Manifest =
            serde_json::from_slice(&text).map_err(|e| CliError::Data(format!("manifest: {e}")))?;
        let mut series = BTreeMap::new();
        for entry in &manifest.files {
            let bytes = fs::read(root.join(&entry.path))
                .map_err(|e| CliError::Data(format!("{}: {e}", entry.path)))?;
            if digest(&bytes) != entry.sha256 {
                return Err(CliError::Data(format!("{}: digest mismatch", entry.path)));
            }
            if let Some(pair) = StatPair::ALL.into_iter().find(|p| correlation_path(*p) == entry.path) {
                series.insert(pair, parse_correlation_csv(&bytes, pair)?);
            }
        }
        Ok(Self {
            root: root.to_path_buf(),
            manifest,
            series,
        })
    }

    /// Adds (or replaces) a file in an existing bundle and rewrites the manifest.
    pub fn add_file(&mut self, rel: &str, bytes: &[u8]) -> Result<(), CliError> {
        fs::write(self.root.join(rel), bytes)?;
        let entry = FileEntry {
            path: rel.to_owned(),
            sha256: digest(bytes),
            bytes: bytes.len(),
        };
        self.manifest.files.retain(|f| f.path != rel);
        self.manifest.files.push(entry);
        self.manifest.files.sort_by(|a, b| a.path.cmp(&b.path));
        fs::write(self.root.join(MANIFEST), manifest_bytes(&self.manifest)?)?;
        Ok(())
    }
}
