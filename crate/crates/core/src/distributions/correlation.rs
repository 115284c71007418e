use std::fmt;
use std::str::FromStr;

use statrs::distribution::{ContinuousCDF, Normal};

use super::DistError;
use crate::ingest::Year;
use crate::scalar::Scalar;
use crate::stats::{NodeStatsTable, Statistic};

/// Two-sided level whose endpoints are the 5% and 95% points.
pub const DEFAULT_CI_LEVEL: f64 = 0.90;

/// Statistic pairs whose year-by-year correlation is tracked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatPair {
    NdNs,
    NdAnnd,
    NsAnns,
    BccNd,
    WccNs,
}

impl StatPair {
    pub const ALL: [StatPair; 5] = [Self::NdNs, Self::NdAnnd, Self::NsAnns, Self::BccNd, Self::WccNs];

    pub fn label(self) -> &'static str {
        match self {
            Self::NdNs => "ND-NS",
            Self::NdAnnd => "ND-ANND",
            Self::NsAnns => "NS-ANNS",
            Self::BccNd => "BCC-ND",
            Self::WccNs => "WCC-NS",
        }
    }

    pub fn statistics(self) -> (Statistic, Statistic) {
        use Statistic::*;
        match self {
            Self::NdNs => (Nd, Ns),
            Self::NdAnnd => (Nd, Annd),
            Self::NsAnns => (Ns, Anns),
            Self::BccNd => (Bcc, Nd),
            Self::WccNs => (Wcc, Ns),
        }
    }
}

impl fmt::Display for StatPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StatPair {
    type Err = DistError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                DistError::InvalidParameter(format!(
                    "unsupported pair `{s}` (expected one of ND-NS, ND-ANND, NS-ANNS, BCC-ND, WCC-NS)"
                ))
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Correlation<S> {
    pub r: S,
    pub ci_low: S,
    pub ci_high: S,
    /// Jointly defined pairs used.
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationPoint<S> {
    pub year: Year,
    pub pair: StatPair,
    pub correlation: Correlation<S>,
}

fn joint(x: &[Option<f64>], y: &[Option<f64>]) -> Vec<(f64, f64)> {
    x.iter()
        .zip(y)
        .filter_map(|(a, b)| Some(((*a)?, (*b)?)))
        .collect()
}

fn to_f64<S: Scalar>(v: &[Option<S>]) -> Vec<Option<f64>> {
    v.iter().map(|x| x.map(Scalar::to_f64_lossy)).collect()
}

/// Pearson `r` over jointly defined pairs.
pub fn pearson<S: Scalar>(x: &[Option<S>], y: &[Option<S>]) -> Result<(S, usize), DistError> {
    if x.len() != y.len() {
        return Err(DistError::InvalidParameter(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let pairs = joint(&to_f64(x), &to_f64(y));
    let n = pairs.len();
    if n < 3 {
        return Err(DistError::TooFewValues { needed: 3, got: n });
    }
    let nf = n as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(a, b) in &pairs {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(DistError::Degenerate("zero variance"));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok((S::from_f64_lossy(r), n))
}

/// Fisher-z interval `tanh(atanh r ± z_{(1+level)/2} / √(n−3))`.
pub fn fisher_interval(r: f64, n: usize, level: f64) -> Result<(f64, f64), DistError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(DistError::InvalidParameter(format!("CI level {level} outside (0, 1)")));
    }
    if n < 3 {
        return Err(DistError::TooFewValues { needed: 3, got: n });
    }
    if r.abs() >= 1.0 {
        return Ok((r, r));
    }
    let quantile = Normal::standard().inverse_cdf(0.5 + level / 2.0);
    let half = quantile / ((n - 3) as f64).sqrt();
    let z = r.atanh();
    Ok(((z - half).tanh(), (z + half).tanh()))
}

pub fn pearson_with_ci<S: Scalar>(
    x: &[Option<S>],
    y: &[Option<S>],
    level: f64,
) -> Result<Correlation<S>, DistError> {
    let (r, n) = pearson(x, y)?;
    let (lo, hi) = fisher_interval(r.to_f64_lossy(), n, level)?;
    Ok(Correlation {
        r,
        ci_low: S::from_f64_lossy(lo).min(r),
        ci_high: S::from_f64_lossy(hi).max(r),
        n,
    })
}

pub fn correlation_point<S: Scalar>(
    table: &NodeStatsTable<S>,
    pair: StatPair,
    level: f64,
) -> Result<CorrelationPoint<S>, DistError> {
    let (sx, sy) = pair.statistics();
    Ok(CorrelationPoint {
        year: table.year,
        pair,
        correlation: pearson_with_ci(&table.column(sx), &table.column(sy), level)?,
    })
}

/// One point per table, in table order.
pub fn correlation_series<S: Scalar>(
    tables: &[NodeStatsTable<S>],
    pair: StatPair,
    level: f64,
) -> Result<Vec<CorrelationPoint<S>>, DistError> {
    tables.iter().map(|t| correlation_point(t, pair, level)).collect()
}
