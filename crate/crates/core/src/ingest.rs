//! Bilateral flow and country-size (GDP) ingestion.
//!
//! Both inputs are header-labelled CSV. Column order is free, column names
//! are fixed: `year,exporter,importer,value` for flows and `year,country,gdp`
//! for sizes. Lines starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};

use thiserror::Error;

pub type Year = i32;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: malformed row: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("missing required column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("line {line}: negative flow value {value} for {exporter}->{importer}")]
    NegativeValue {
        line: u64,
        exporter: String,
        importer: String,
        value: f64,
    },
    #[error("line {line}: self-flow for {country} in {year}")]
    SelfFlow { line: u64, year: Year, country: String },
    #[error("line {line}: duplicate flow {exporter}->{importer} in {year}")]
    DuplicateFlow {
        line: u64,
        year: Year,
        exporter: String,
        importer: String,
    },
    #[error("line {line}: nonpositive GDP {gdp} for {country} in {year}")]
    NonPositiveGdp {
        line: u64,
        year: Year,
        country: String,
        gdp: f64,
    },
    #[error("line {line}: duplicate GDP record for {country} in {year}")]
    DuplicateSize { line: u64, year: Year, country: String },
    #[error("no flow records")]
    EmptyFlows,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Sorted, deduplicated country codes with a code → position index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountryRegistry {
    codes: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl CountryRegistry {
    pub fn new<I, S>(codes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = codes.into_iter().map(Into::into).collect();
        let codes: Vec<String> = set.into_iter().collect();
        let index = codes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        Self { codes, index }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn index_of(&self, code: &str) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn code(&self, i: usize) -> &str {
        &self.codes[i]
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    /// Registry of `n` zero-padded numeric codes, `"000"`, `"001"`, ...
    /// whose lexicographic order matches their numeric order.
    pub fn numbered(n: usize) -> Self {
        let width = n.saturating_sub(1).to_string().len().max(3);
        Self::new((0..n).map(|i| format!("{i:0width$}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowRecord {
    pub year: Year,
    pub exporter: String,
    pub importer: String,
    /// Current US dollars.
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SizeRecord {
    pub year: Year,
    pub country: String,
    /// Current US dollars, strictly positive.
    pub gdp: f64,
}

/// Non-fatal findings attached to a panel at assembly time.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PanelWarning {
    /// `country` exports in `year` but has no GDP record for that year.
    MissingGdp { year: Year, country: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PanelDataset {
    pub registry: CountryRegistry,
    pub years: Vec<Year>,
    pub flows: BTreeMap<Year, Vec<FlowRecord>>,
    pub sizes: BTreeMap<Year, Vec<SizeRecord>>,
    pub warnings: Vec<PanelWarning>,
}

/// Delimited-text layout of a flow file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowFormat {
    pub delimiter: u8,
}

impl Default for FlowFormat {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

fn reader<R: Read>(source: R, delimiter: u8) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(source)
}

fn column(headers: &csv::StringRecord, name: &'static str) -> Result<usize, IngestError> {
    headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or(IngestError::MissingColumn(name))
}

fn csv_error(e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => IngestError::Io(io),
        kind => IngestError::Malformed {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

fn field<'r>(rec: &'r csv::StringRecord, idx: usize, line: u64, name: &str) -> Result<&'r str, IngestError> {
    match rec.get(idx) {
        Some(s) if !s.is_empty() => Ok(s),
        _ => Err(IngestError::Malformed {
            line,
            reason: format!("empty `{name}`"),
        }),
    }
}

fn parse_year(s: &str, line: u64) -> Result<Year, IngestError> {
    s.parse().map_err(|_| IngestError::Malformed {
        line,
        reason: format!("invalid year `{s}`"),
    })
}

fn parse_real(s: &str, line: u64, name: &str) -> Result<f64, IngestError> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(IngestError::Malformed {
            line,
            reason: format!("invalid {name} `{s}`"),
        }),
    }
}

/// Parses a flow file. Row order is preserved.
pub fn parse_flows<R: Read>(source: R, format: FlowFormat) -> Result<Vec<FlowRecord>, IngestError> {
    let mut rdr = reader(source, format.delimiter);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let (cy, ce, ci, cv) = (
        column(&headers, "year")?,
        column(&headers, "exporter")?,
        column(&headers, "importer")?,
        column(&headers, "value")?,
    );

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let year = parse_year(field(&rec, cy, line, "year")?, line)?;
        let exporter = field(&rec, ce, line, "exporter")?.to_owned();
        let importer = field(&rec, ci, line, "importer")?.to_owned();
        let value = parse_real(field(&rec, cv, line, "value")?, line, "value")?;

        if exporter == importer {
            return Err(IngestError::SelfFlow {
                line,
                year,
                country: exporter,
            });
        }
        if value < 0.0 {
            return Err(IngestError::NegativeValue {
                line,
                exporter,
                importer,
                value,
            });
        }
        if !seen.insert((year, exporter.clone(), importer.clone())) {
            return Err(IngestError::DuplicateFlow {
                line,
                year,
                exporter,
                importer,
            });
        }
        out.push(FlowRecord {
            year,
            exporter,
            importer,
            value,
        });
    }
    Ok(out)
}

/// Parses a GDP file.
pub fn parse_sizes<R: Read>(source: R) -> Result<Vec<SizeRecord>, IngestError> {
    let mut rdr = reader(source, b',');
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let (cy, cc, cg) = (
        column(&headers, "year")?,
        column(&headers, "country")?,
        column(&headers, "gdp")?,
    );

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let year = parse_year(field(&rec, cy, line, "year")?, line)?;
        let country = field(&rec, cc, line, "country")?.to_owned();
        let gdp = parse_real(field(&rec, cg, line, "gdp")?, line, "gdp")?;
        if gdp <= 0.0 {
            return Err(IngestError::NonPositiveGdp {
                line,
                year,
                country,
                gdp,
            });
        }
        if !seen.insert((year, country.clone())) {
            return Err(IngestError::DuplicateSize { line, year, country });
        }
        out.push(SizeRecord { year, country, gdp });
    }
    Ok(out)
}

/// Groups records by year over the union registry of all mentioned countries.
///
/// Exporters without a GDP record in a year produce a [`PanelWarning`]; the
/// check becomes fatal only when a weighting scheme actually divides by GDP.
pub fn assemble_panel(flows: Vec<FlowRecord>, sizes: Vec<SizeRecord>) -> Result<PanelDataset, IngestError> {
    if flows.is_empty() {
        return Err(IngestError::EmptyFlows);
    }

    let registry = CountryRegistry::new(
        flows
            .iter()
            .flat_map(|f| [f.exporter.as_str(), f.importer.as_str()])
            .chain(sizes.iter().map(|s| s.country.as_str())),
    );

    let mut by_year_flows: BTreeMap<Year, Vec<FlowRecord>> = BTreeMap::new();
    for f in flows {
        by_year_flows.entry(f.year).or_default().push(f);
    }
    let mut by_year_sizes: BTreeMap<Year, Vec<SizeRecord>> = BTreeMap::new();
    for s in sizes {
        by_year_sizes.entry(s.year).or_default().push(s);
    }

    let years: Vec<Year> = by_year_flows
        .keys()
        .chain(by_year_sizes.keys())
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut warnings = BTreeSet::new();
    for (year, fs) in &by_year_flows {
        let have: HashSet<&str> = by_year_sizes
            .get(year)
            .map(|v| v.iter().map(|s| s.country.as_str()).collect())
            .unwrap_or_default();
        for f in fs {
            if !have.contains(f.exporter.as_str()) {
                warnings.insert(PanelWarning::MissingGdp {
                    year: *year,
                    country: f.exporter.clone(),
                });
            }
        }
    }

    Ok(PanelDataset {
        registry,
        years,
        flows: by_year_flows,
        sizes: by_year_sizes,
        warnings: warnings.into_iter().collect(),
    })
}

impl PanelDataset {
    pub fn gdp(&self, year: Year, country: &str) -> Option<f64> {
        self.sizes
            .get(&year)?
            .iter()
            .find(|s| s.country == country)
            .map(|s| s.gdp)
    }

    /// Writes the flow records in canonical CSV, grouped by year.
    pub fn write_flows<W: Write>(&self, sink: W) -> Result<(), IngestError> {
        write_flows(sink, self.flows.values().flatten())
    }

    /// Writes the size records in canonical CSV, grouped by year.
    pub fn write_sizes<W: Write>(&self, sink: W) -> Result<(), IngestError> {
        write_sizes(sink, self.sizes.values().flatten())
    }
}

// `{}` on f64 prints the shortest representation that parses back to the same bits.
pub fn write_flows<'a, W: Write>(
    mut sink: W,
    records: impl IntoIterator<Item = &'a FlowRecord>,
) -> Result<(), IngestError> {
    writeln!(sink, "year,exporter,importer,value")?;
    for r in records {
        writeln!(sink, "{},{},{},{}", r.year, r.exporter, r.importer, r.value)?;
    }
    Ok(())
}

pub fn write_sizes<'a, W: Write>(
    mut sink: W,
    records: impl IntoIterator<Item = &'a SizeRecord>,
) -> Result<(), IngestError> {
    writeln!(sink, "year,country,gdp")?;
    for r in records {
        writeln!(sink, "{},{},{}", r.year, r.country, r.gdp)?;
    }
    Ok(())
}
