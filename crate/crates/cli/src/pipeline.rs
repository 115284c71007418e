//! End-to-end run: ingest → per-year networks and statistics → analyses → bundle.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use log::{debug, info, warn};
use rayon::prelude::*;

use wnet::distributions::{correlation_point, fit_tail, kde, rank_size, DistError, KdeOptions, StatPair};
use wnet::graph::{build_directed_shared, symmetrize, symmetry_index, write_matrix_dump};
use wnet::ingest::{assemble_panel, parse_flows, parse_sizes, FlowFormat, PanelDataset, PanelWarning, Year};
use wnet::stats::{node_stats, Statistic, StatsError};
use wnet::{CorrelationPoint64, DirectedTradeNetwork64, NodeStatsTable64, UndirectedNetwork64};

use crate::bundle::{
    conventions, correlation_csv, correlation_path, BundleFiles, ConfigEcho, Manifest, ReportBundle, Skipped,
    Software, YearNormalizer,
};
use crate::compare::{compare_views, LabelThresholds};
use crate::config::{Analysis, PipelineConfig};
use crate::error::CliError;

/// Statistics whose kernel densities are emitted.
const DENSITY_STATS: [Statistic; 2] = [Statistic::Nd, Statistic::Ns];
/// Statistics whose rank-size curves and tail fits are emitted.
const TAIL_STATS: [Statistic; 1] = [Statistic::Ns];

/// Everything computed for one year before any analysis runs.
#[derive(Debug)]
pub struct YearResult {
    pub year: Year,
    pub directed_links: usize,
    pub symmetry_index: f64,
    pub network: UndirectedNetwork64,
    pub table: NodeStatsTable64,
}

fn read_input(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))
}

pub fn load_panel(cfg: &PipelineConfig) -> Result<PanelDataset, CliError> {
    let flows = parse_flows(read_input(&cfg.flows)?, FlowFormat::default()).map_err(|source| CliError::Ingest {
        context: cfg.flows.display().to_string(),
        source,
    })?;
    let sizes = match &cfg.gdp {
        Some(p) => parse_sizes(read_input(p)?).map_err(|source| CliError::Ingest {
            context: p.display().to_string(),
            source,
        })?,
        None => Vec::new(),
    };
    assemble_panel(flows, sizes).map_err(|source| CliError::Ingest {
        context: cfg.flows.display().to_string(),
        source,
    })
}

fn process_year(panel: &PanelDataset, registry: &Arc<wnet::ingest::CountryRegistry>, year: Year, cfg: &PipelineConfig) -> Result<YearResult, CliError> {
    let directed: DirectedTradeNetwork64 = build_directed_shared(panel, Arc::clone(registry), year, cfg.scheme)?;
    let symmetry_index = symmetry_index(&directed)?;
    let network = symmetrize(&directed)?;
    let table = node_stats(&network);
    debug!(
        "year {year}: {} directed links, {} undirected, normalizer {}",
        directed.link_count(),
        network.link_count(),
        network.normalizer
    );
    Ok(YearResult {
        year,
        directed_links: directed.link_count(),
        symmetry_index,
        network,
        table,
    })
}

/// Builds every requested year, in parallel up to `cfg.jobs` threads.
/// Results come back in ascending year order; the first failing year aborts.
pub fn process_years(panel: &PanelDataset, years: &[Year], cfg: &PipelineConfig) -> Result<Vec<YearResult>, CliError> {
    let registry = Arc::new(panel.registry.clone());
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| {
        years
            .par_iter()
            .map(|&y| process_year(panel, &registry, y, cfg))
            .collect()
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

struct Renderer<'a> {
    cfg: &'a PipelineConfig,
    files: BundleFiles,
    skipped: Vec<Skipped>,
    series: BTreeMap<StatPair, Vec<CorrelationPoint64>>,
}

impl Renderer<'_> {
    /// Records an insufficient-data error as a skip; anything else is fatal.
    fn skip_or_fail(&mut self, analysis: Analysis, year: Option<Year>, subject: String, e: DistError) -> Result<(), CliError> {
        if e.is_insufficient_data() {
            warn!("skipping {analysis} for {subject} ({}): {e}", year.map(|y| y.to_string()).unwrap_or_default());
            self.skipped.push(Skipped {
                analysis: analysis.to_string(),
                year,
                subject,
                reason: e.to_string(),
            });
            Ok(())
        } else {
            Err(e.into())
        }
    }

    fn stats(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        for r in results {
            let mut buf = Vec::new();
            r.table.write_csv(&mut buf)?;
            self.files.insert(format!("stats/{}.csv", r.year), buf);
        }
        Ok(())
    }

    fn moments(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        let mut s = String::from("statistic,year,mean,std,skewness,kurtosis,count\n");
        for r in results {
            for stat in Statistic::ALL {
                match r.table.moment_summary(stat) {
                    Ok(m) => {
                        let m = m.moments;
                        s.push_str(&format!(
                            "{stat},{},{},{},{},{},{}\n",
                            r.year,
                            m.mean,
                            m.std,
                            opt(m.skewness),
                            opt(m.kurtosis),
                            m.count
                        ));
                    }
                    Err(StatsError::TooFewValues { needed, got }) => {
                        self.skip_or_fail(Analysis::Moments, Some(r.year), stat.to_string(), DistError::TooFewValues { needed, got })?;
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
        self.files.insert("moments.csv", s.into_bytes());
        Ok(())
    }

    fn correlations(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        for pair in StatPair::ALL {
            let mut points = Vec::new();
            for r in results {
                match correlation_point(&r.table, pair, self.cfg.ci_level) {
                    Ok(p) => points.push(p),
                    Err(e) => self.skip_or_fail(Analysis::Correlations, Some(r.year), pair.to_string(), e)?,
                }
            }
            self.files.insert(correlation_path(pair), correlation_csv(&points));
            self.series.insert(pair, points);
        }
        Ok(())
    }

    fn density(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        let opts = KdeOptions {
            bandwidth: self.cfg.bandwidth,
            ..KdeOptions::default()
        };
        let mut params = String::from("statistic,year,bandwidth,n,points\n");
        for r in results {
            for stat in DENSITY_STATS {
                match kde(&r.table.column(stat), opts) {
                    Ok(d) => {
                        let mut s = String::from("x,density\n");
                        for (x, y) in d.grid.iter().zip(&d.density) {
                            s.push_str(&format!("{x},{y}\n"));
                        }
                        self.files.insert(format!("density/{stat}_{}.csv", r.year), s.into_bytes());
                        params.push_str(&format!("{stat},{},{},{},{}\n", r.year, d.bandwidth, d.n, d.grid.len()));
                    }
                    Err(e) => self.skip_or_fail(Analysis::Density, Some(r.year), stat.to_string(), e)?,
                }
            }
        }
        self.files.insert("density/parameters.csv", params.into_bytes());
        Ok(())
    }

    fn ranksize(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        for r in results {
            for stat in TAIL_STATS {
                match rank_size(&r.table.column(stat)) {
                    Ok(c) => {
                        let mut s = String::from("rank,size\n");
                        for (rank, size) in c.ranks().zip(&c.sizes) {
                            s.push_str(&format!("{rank},{size}\n"));
                        }
                        self.files.insert(format!("ranksize/{stat}_{}.csv", r.year), s.into_bytes());
                    }
                    Err(e) => self.skip_or_fail(Analysis::Ranksize, Some(r.year), stat.to_string(), e)?,
                }
            }
        }
        Ok(())
    }

    fn tailfit(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        let mut s = String::from("statistic,year,mu,sigma,alpha,x_min,tail_fraction,k,n,dropped\n");
        for r in results {
            for stat in TAIL_STATS {
                match fit_tail(&r.table.column(stat), self.cfg.tail_fraction) {
                    Ok(f) => s.push_str(&format!(
                        "{stat},{},{},{},{},{},{},{},{},{}\n",
                        r.year, f.mu, f.sigma, f.alpha, f.x_min, f.tail_fraction, f.k, f.n, f.dropped
                    )),
                    Err(e) => self.skip_or_fail(Analysis::Tailfit, Some(r.year), stat.to_string(), e)?,
                }
            }
        }
        self.files.insert("tailfit.csv", s.into_bytes());
        Ok(())
    }

    fn symmetry(&mut self, results: &[YearResult]) {
        let mut s = String::from("year,symmetry_index,normalizer,directed_links,undirected_links\n");
        for r in results {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.year,
                r.symmetry_index,
                r.network.normalizer,
                r.directed_links,
                r.network.link_count()
            ));
        }
        self.files.insert("symmetry.csv", s.into_bytes());
    }

    fn matrices(&mut self, results: &[YearResult]) -> Result<(), CliError> {
        for r in results {
            let mut buf = Vec::new();
            write_matrix_dump(&mut buf, &r.network, self.cfg.scheme.variant())?;
            self.files.insert(format!("networks/{}.txt", r.year), buf);
        }
        Ok(())
    }

    fn counts(&mut self, results: &[YearResult]) {
        let mut s = String::from("year,statistic,nodes,undefined,zero\n");
        for r in results {
            for stat in Statistic::ALL {
                let col = r.table.column(stat);
                let zero = col.iter().filter(|v| **v == Some(0.0)).count();
                s.push_str(&format!("{},{stat},{},{},{zero}\n", r.year, col.len(), r.table.undefined_count(stat)));
            }
        }
        self.files.insert("counts.csv", s.into_bytes());
    }
}

fn config_echo(cfg: &PipelineConfig) -> ConfigEcho {
    ConfigEcho {
        flows: cfg.flows.display().to_string(),
        gdp: cfg.gdp.as_ref().map(|p| p.display().to_string()),
        scheme: cfg.scheme.variant().to_string(),
        threshold: cfg.scheme.threshold(),
        years: cfg.years.to_string(),
        analyses: cfg.analyses.iter().map(ToString::to_string).collect(),
        ci_level: cfg.ci_level,
        tail_fraction: cfg.tail_fraction,
        bandwidth: cfg.bandwidth,
        dump_matrices: cfg.dump_matrices,
        strong: cfg.strong,
        moderate: cfg.moderate,
    }
}

/// Runs the whole pipeline and writes the bundle to `cfg.out`.
///
/// When `compare` is set and the correlation series are available, the
/// BNA/WNA comparison table is added as `comparison.csv`.
pub fn run_pipeline_with(cfg: &PipelineConfig, compare: bool) -> Result<ReportBundle, CliError> {
    cfg.validate()?;
    let panel = load_panel(cfg)?;
    let flow_years: Vec<Year> = panel.flows.keys().copied().collect();
    let years = cfg.years.resolve(&flow_years)?;
    for w in &panel.warnings {
        let PanelWarning::MissingGdp { year, country } = w;
        if years.contains(year) {
            warn!("{country} exports in {year} but has no GDP record");
        }
    }
    info!("processing {} year(s) over {} countries", years.len(), panel.registry.len());
    let results = process_years(&panel, &years, cfg)?;

    let mut r = Renderer {
        cfg,
        files: BundleFiles::default(),
        skipped: Vec::new(),
        series: BTreeMap::new(),
    };
    for analysis in &cfg.analyses {
        match analysis {
            Analysis::Stats => r.stats(&results)?,
            Analysis::Moments => r.moments(&results)?,
            Analysis::Correlations => r.correlations(&results)?,
            Analysis::Density => r.density(&results)?,
            Analysis::Ranksize => r.ranksize(&results)?,
            Analysis::Tailfit => r.tailfit(&results)?,
            Analysis::Symmetry => r.symmetry(&results),
        }
    }
    if cfg.dump_matrices {
        r.matrices(&results)?;
    }
    r.counts(&results);

    let mut bundle = ReportBundle {
        root: cfg.out.clone(),
        manifest: Manifest {
            software: Software {
                name: env!("CARGO_PKG_NAME").to_owned(),
                version: env!("CARGO_PKG_VERSION").to_owned(),
            },
            config: config_echo(cfg),
            conventions: conventions(),
            years: years.clone(),
            normalizers: results
                .iter()
                .map(|y| YearNormalizer {
                    year: y.year,
                    normalizer: y.network.normalizer,
                })
                .collect(),
            panel_warnings: panel
                .warnings
                .iter()
                .map(|PanelWarning::MissingGdp { year, country }| format!("missing GDP: {country} in {year}"))
                .collect(),
            skipped: Vec::new(),
            files: Vec::new(),
        },
        series: std::mem::take(&mut r.series),
    };

    if compare && cfg.analyses.contains(&Analysis::Correlations) {
        let t = LabelThresholds {
            strong: cfg.strong,
            moderate: cfg.moderate,
        };
        match compare_views(&bundle, t) {
            Ok(table) => {
                info!("\n{table}");
                r.files.insert("comparison.csv", table.to_csv());
            }
            Err(CliError::Data(msg)) => {
                warn!("comparison table skipped: {msg}");
                r.skipped.push(Skipped {
                    analysis: "comparison".into(),
                    year: None,
                    subject: "BNA/WNA".into(),
                    reason: msg,
                });
            }
            Err(e) => return Err(e),
        }
    }

    bundle.manifest.skipped = r.skipped;
    bundle.manifest.files = r.files.entries();
    r.files.write_atomically(&cfg.out, &bundle.manifest)?;
    info!("wrote {} files to {}", bundle.manifest.files.len() + 1, cfg.out.display());
    Ok(bundle)
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<ReportBundle, CliError> {
    run_pipeline_with(cfg, true)
}
