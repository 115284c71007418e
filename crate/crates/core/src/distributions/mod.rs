//! Distributional and correlation analyses of node statistics.

mod correlation;
mod kde;
mod tail;

use thiserror::Error;

pub use correlation::{
    correlation_point, correlation_series, fisher_interval, pearson, pearson_with_ci, Correlation,
    CorrelationPoint, StatPair, DEFAULT_CI_LEVEL,
};
pub use kde::{kde, silverman_bandwidth, DensityEstimate, KdeOptions, DEFAULT_GRID_POINTS};
pub use tail::{fit_tail, rank_size, RankSizeCurve, TailFit, DEFAULT_TAIL_FRACTION};

#[derive(Debug, Error)]
pub enum DistError {
    #[error("need at least {needed} usable values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl DistError {
    /// True for errors caused by the data being too small or too flat for the
    /// analysis, as opposed to a bad parameter.
    pub fn is_insufficient_data(&self) -> bool {
        matches!(self, Self::TooFewValues { .. } | Self::Degenerate(_))
    }
}

/// Linear-interpolation quantile of sorted data (the "type 7" rule).
pub(crate) fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub(crate) fn sort_f64(v: &mut [f64]) {
    v.sort_by(f64::total_cmp);
}
