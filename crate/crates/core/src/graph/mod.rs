//! Per-year directed networks and their undirected, max-normalized form.
//!
//! Rows index exporters and columns index importers, so `w̃[i][j]` is the
//! weight of the flow of goods from country `i` to country `j`.

mod dump;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::ingest::{CountryRegistry, PanelDataset, Year};
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

pub use dump::{read_matrix_dump, write_matrix_dump, MatrixDump};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("year {0} not present in panel")]
    YearAbsent(Year),
    #[error("year {year}: GDP missing for {country}, required by the {scheme} scheme")]
    MissingGdp {
        year: Year,
        country: String,
        scheme: WeightVariant,
    },
    #[error("year {0}: no flow exceeds the link threshold")]
    NoLinks(Year),
    #[error("invalid link threshold {0}; must be finite and nonnegative")]
    InvalidThreshold(f64),
    #[error("invalid network: {0}")]
    Invalid(String),
    #[error("matrix dump line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// How a flow `e_ij` is turned into a directed weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightVariant {
    /// `e_ij / GDP_i`
    ExporterGdp,
    /// `e_ij / GDP_j`
    ImporterGdp,
    /// `e_ij`
    Raw,
}

impl WeightVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ExporterGdp => "exporter-gdp",
            Self::ImporterGdp => "importer-gdp",
            Self::Raw => "raw",
        }
    }

    pub fn needs_gdp(self) -> bool {
        !matches!(self, Self::Raw)
    }
}

impl fmt::Display for WeightVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exporter-gdp" => Ok(Self::ExporterGdp),
            "importer-gdp" => Ok(Self::ImporterGdp),
            "raw" => Ok(Self::Raw),
            other => Err(format!(
                "unknown scheme `{other}` (expected exporter-gdp, importer-gdp or raw)"
            )),
        }
    }
}

/// Weighting variant plus the link-existence threshold.
///
/// A link `i -> j` exists iff `e_ij > threshold` (strict), so the default
/// threshold of zero keeps every strictly positive flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightScheme {
    variant: WeightVariant,
    threshold: f64,
}

impl WeightScheme {
    pub fn new(variant: WeightVariant, threshold: f64) -> Result<Self, GraphError> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(GraphError::InvalidThreshold(threshold));
        }
        Ok(Self { variant, threshold })
    }

    pub fn variant(&self) -> WeightVariant {
        self.variant
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self {
            variant: WeightVariant::ExporterGdp,
            threshold: 0.0,
        }
    }
}

impl From<WeightVariant> for WeightScheme {
    fn from(variant: WeightVariant) -> Self {
        Self {
            variant,
            threshold: 0.0,
        }
    }
}

/// Directed binary and weighted matrices `Ã`, `W̃` for one year.
#[derive(Clone, Debug)]
pub struct DirectedTradeNetwork<S> {
    pub year: Year,
    pub registry: Arc<CountryRegistry>,
    pub adjacency: SquareMatrix<u8>,
    pub weights: SquareMatrix<S>,
}

impl<S: Scalar> DirectedTradeNetwork<S> {
    /// Builds a directed network from a weight matrix; links are the positive entries.
    pub fn from_weights(
        year: Year,
        registry: Arc<CountryRegistry>,
        weights: SquareMatrix<S>,
    ) -> Result<Self, GraphError> {
        check_dim(&registry, weights.dim())?;
        for i in 0..weights.dim() {
            if weights.get(i, i) != S::zero() {
                return Err(GraphError::Invalid(format!("nonzero diagonal at node {i}")));
            }
        }
        if weights.as_slice().iter().any(|w| !(w.is_finite() && *w >= S::zero())) {
            return Err(GraphError::Invalid("weights must be finite and nonnegative".into()));
        }
        let adjacency = weights.map(|w| u8::from(w > S::zero()));
        Ok(Self {
            year,
            registry,
            adjacency,
            weights,
        })
    }

    pub fn node_count(&self) -> usize {
        self.weights.dim()
    }

    /// Number of directed links `i -> j`.
    pub fn link_count(&self) -> usize {
        self.adjacency.as_slice().iter().filter(|&&a| a == 1).count()
    }
}

/// Symmetric binary matrix `A` and symmetric weight matrix `W` for one year.
///
/// Networks produced by [`symmetrize`] have `max(W) == 1`; `normalizer`
/// records the pre-normalization maximum so raw-scale weights can be
/// recovered as `w_ij * normalizer`.
#[derive(Clone, Debug)]
pub struct UndirectedNetwork<S> {
    pub year: Year,
    pub registry: Arc<CountryRegistry>,
    pub adjacency: SquareMatrix<u8>,
    pub weights: SquareMatrix<S>,
    pub normalizer: S,
}

impl<S: Scalar> UndirectedNetwork<S> {
    /// Wraps an already symmetric weight matrix with entries in `[0, 1]`.
    ///
    /// The matrix is taken as-is (no rescaling); the adjacency is derived
    /// from the positive entries.
    pub fn from_weights(
        year: Year,
        registry: Arc<CountryRegistry>,
        weights: SquareMatrix<S>,
        normalizer: S,
    ) -> Result<Self, GraphError> {
        check_dim(&registry, weights.dim())?;
        if !weights.is_symmetric() {
            return Err(GraphError::Invalid("weight matrix is not symmetric".into()));
        }
        for i in 0..weights.dim() {
            if weights.get(i, i) != S::zero() {
                return Err(GraphError::Invalid(format!("nonzero diagonal at node {i}")));
            }
        }
        if weights
            .as_slice()
            .iter()
            .any(|&w| !(w >= S::zero() && w <= S::one()))
        {
            return Err(GraphError::Invalid("weights must lie in [0, 1]".into()));
        }
        if !(normalizer > S::zero() && normalizer.is_finite()) {
            return Err(GraphError::Invalid("normalizer must be positive".into()));
        }
        let adjacency = weights.map(|w| u8::from(w > S::zero()));
        Ok(Self {
            year,
            registry,
            adjacency,
            weights,
            normalizer,
        })
    }

    /// Unit-weight network on a binary symmetric adjacency matrix (`W = A`).
    pub fn binary(year: Year, registry: Arc<CountryRegistry>, adjacency: SquareMatrix<u8>) -> Result<Self, GraphError> {
        let weights = adjacency.map(|a| if a != 0 { S::one() } else { S::zero() });
        Self::from_weights(year, registry, weights, S::one())
    }

    pub fn node_count(&self) -> usize {
        self.weights.dim()
    }

    /// Number of undirected links.
    pub fn link_count(&self) -> usize {
        self.adjacency.as_slice().iter().filter(|&&a| a == 1).count() / 2
    }

    /// Reorders nodes so that new node `i` is old node `perm[i]`.
    ///
    /// The registry is kept as-is (it is always sorted), so only the matrices move.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            year: self.year,
            registry: Arc::clone(&self.registry),
            adjacency: self.adjacency.permuted(perm),
            weights: self.weights.permuted(perm),
            normalizer: self.normalizer,
        }
    }
}

fn check_dim(registry: &CountryRegistry, n: usize) -> Result<(), GraphError> {
    if registry.len() != n {
        return Err(GraphError::Invalid(format!(
            "registry has {} countries but matrix is {n}x{n}",
            registry.len()
        )));
    }
    Ok(())
}

/// Builds `Ã` and `W̃` for `year` from a panel under `scheme`.
pub fn build_directed<S: Scalar>(
    panel: &PanelDataset,
    year: Year,
    scheme: WeightScheme,
) -> Result<DirectedTradeNetwork<S>, GraphError> {
    build_directed_shared(panel, Arc::new(panel.registry.clone()), year, scheme)
}

/// As [`build_directed`], reusing an already shared copy of the panel registry.
pub fn build_directed_shared<S: Scalar>(
    panel: &PanelDataset,
    registry: Arc<CountryRegistry>,
    year: Year,
    scheme: WeightScheme,
) -> Result<DirectedTradeNetwork<S>, GraphError> {
    if !panel.years.contains(&year) {
        return Err(GraphError::YearAbsent(year));
    }
    let n = registry.len();
    let mut adjacency = SquareMatrix::<u8>::zeros(n);
    let mut weights = SquareMatrix::<S>::zeros(n);

    let gdp = |country: &str| -> Result<f64, GraphError> {
        panel.gdp(year, country).ok_or_else(|| GraphError::MissingGdp {
            year,
            country: country.to_owned(),
            scheme: scheme.variant,
        })
    };

    for f in panel.flows.get(&year).map(Vec::as_slice).unwrap_or_default() {
        if f.value <= scheme.threshold {
            continue;
        }
        let (i, j) = match (registry.index_of(&f.exporter), registry.index_of(&f.importer)) {
            (Some(i), Some(j)) => (i, j),
            _ => {
                return Err(GraphError::Invalid(format!(
                    "flow {}->{} references a country outside the registry",
                    f.exporter, f.importer
                )))
            }
        };
        let w = match scheme.variant {
            WeightVariant::ExporterGdp => f.value / gdp(&f.exporter)?,
            WeightVariant::ImporterGdp => f.value / gdp(&f.importer)?,
            WeightVariant::Raw => f.value,
        };
        adjacency.set(i, j, 1);
        weights.set(i, j, S::from_f64_lossy(w));
    }

    if adjacency.as_slice().iter().all(|&a| a == 0) {
        return Err(GraphError::NoLinks(year));
    }
    Ok(DirectedTradeNetwork {
        year,
        registry,
        adjacency,
        weights,
    })
}

/// Link union `a_ij = max(ã_ij, ã_ji)`, weight average `½(w̃_ij + w̃_ji)`,
/// then division by the largest averaged weight.
pub fn symmetrize<S: Scalar>(net: &DirectedTradeNetwork<S>) -> Result<UndirectedNetwork<S>, GraphError> {
    let n = net.node_count();
    let half = S::from_f64_lossy(0.5);
    let averaged = SquareMatrix::from_fn(n, |i, j| {
        if i == j {
            S::zero()
        } else {
            (net.weights.get(i, j) + net.weights.get(j, i)) * half
        }
    });
    let normalizer = averaged
        .as_slice()
        .iter()
        .copied()
        .fold(S::zero(), S::max);
    if normalizer <= S::zero() {
        return Err(GraphError::NoLinks(net.year));
    }
    let adjacency = SquareMatrix::from_fn(n, |i, j| net.adjacency.get(i, j).max(net.adjacency.get(j, i)));
    let weights = averaged.map(|w| w / normalizer);
    Ok(UndirectedNetwork {
        year: net.year,
        registry: Arc::clone(&net.registry),
        adjacency,
        weights,
        normalizer,
    })
}

/// `‖W̃ − W̃ᵀ‖_F / ‖W̃ + W̃ᵀ‖_F`: 0 for a symmetric matrix, 1 when no weight is reciprocated.
pub fn symmetry_index<S: Scalar>(net: &DirectedTradeNetwork<S>) -> Result<S, GraphError> {
    let n = net.node_count();
    let (mut diff, mut sum) = (S::zero(), S::zero());
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (net.weights.get(i, j), net.weights.get(j, i));
            diff = diff + (a - b) * (a - b);
            sum = sum + (a + b) * (a + b);
        }
    }
    if sum <= S::zero() {
        return Err(GraphError::NoLinks(net.year));
    }
    Ok((diff / sum).sqrt())
}
