//! Binary and weighted analysis of trade-style networks.
//!
//! The pipeline is: parse bilateral flows and country sizes ([`ingest`]),
//! build a directed weighted network per year and symmetrize it ([`graph`]),
//! compute node statistics ([`stats`]), then study their distributions and
//! cross-correlations ([`distributions`]).
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the CLI uses.

pub mod distributions;
pub mod graph;
pub mod ingest;
pub mod matrix;
pub mod scalar;
pub mod stats;

pub use scalar::Scalar;

pub type DirectedTradeNetwork64 = graph::DirectedTradeNetwork<f64>;
pub type UndirectedNetwork64 = graph::UndirectedNetwork<f64>;
pub type NodeStatsTable64 = stats::NodeStatsTable<f64>;
pub type MomentSummary64 = stats::MomentSummary<f64>;
pub type DensityEstimate64 = distributions::DensityEstimate<f64>;
pub type CorrelationPoint64 = distributions::CorrelationPoint<f64>;
pub type TailFit64 = distributions::TailFit<f64>;
pub type RankSizeCurve64 = distributions::RankSizeCurve<f64>;

pub type DirectedTradeNetwork32 = graph::DirectedTradeNetwork<f32>;
pub type UndirectedNetwork32 = graph::UndirectedNetwork<f32>;
pub type NodeStatsTable32 = stats::NodeStatsTable<f32>;
