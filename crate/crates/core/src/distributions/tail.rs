use super::{sort_f64, DistError};
use crate::scalar::Scalar;

pub const DEFAULT_TAIL_FRACTION: f64 = 0.05;

const MIN_TAIL_SAMPLE: usize = 50;

/// Positive values sorted in decreasing order against ranks `1..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankSizeCurve<S> {
    pub sizes: Vec<S>,
    /// Zero or undefined inputs that were left out.
    pub dropped: usize,
}

impl<S: Scalar> RankSizeCurve<S> {
    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.sizes.len()
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Least-squares slope of `ln(size)` on `ln(rank)` over ranks `1..=top`.
    ///
    /// For a Pareto sample with exponent `α` the slope is close to `−1/α`.
    pub fn log_log_slope(&self, top: usize) -> Option<f64> {
        let top = top.min(self.sizes.len());
        if top < 2 {
            return None;
        }
        let pts: Vec<(f64, f64)> = self.sizes[..top]
            .iter()
            .enumerate()
            .map(|(i, s)| (((i + 1) as f64).ln(), s.to_f64_lossy().ln()))
            .collect();
        let n = top as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    }
}

pub fn rank_size<S: Scalar>(values: &[Option<S>]) -> Result<RankSizeCurve<S>, DistError> {
    let mut sizes: Vec<S> = values.iter().flatten().copied().filter(|v| *v > S::zero()).collect();
    if sizes.is_empty() {
        return Err(DistError::TooFewValues { needed: 1, got: 0 });
    }
    let dropped = values.len() - sizes.len();
    sizes.sort_by(|a, b| b.partial_cmp(a).expect("finite statistics"));
    Ok(RankSizeCurve { sizes, dropped })
}

/// Log-normal body and Pareto upper tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit<S> {
    /// Mean of `ln x` over the full positive sample.
    pub mu: S,
    /// Population standard deviation of `ln x` (the maximum-likelihood estimate).
    pub sigma: S,
    /// Hill estimate over the `k` largest values.
    pub alpha: S,
    /// Upper `q`-quantile of the sample; the Hill reference point.
    pub x_min: S,
    pub tail_fraction: f64,
    pub k: usize,
    pub n: usize,
    pub dropped: usize,
}

/// Fits `μ, σ` of `ln x` by maximum likelihood and the tail exponent by
/// Hill's estimator `α = k / Σ_{i<k} ln(x_(i) / x_(k))`, where `x_(0) ≥ x_(1) ≥ …`
/// and `k = ⌊q·n⌋`.
pub fn fit_tail<S: Scalar>(values: &[Option<S>], tail_fraction: f64) -> Result<TailFit<S>, DistError> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(DistError::InvalidParameter(format!(
            "tail fraction {tail_fraction} outside (0, 1)"
        )));
    }
    let mut xs: Vec<f64> = values
        .iter()
        .flatten()
        .map(|v| v.to_f64_lossy())
        .filter(|&v| v > 0.0)
        .collect();
    let n = xs.len();
    let dropped = values.len() - n;
    if n < MIN_TAIL_SAMPLE {
        return Err(DistError::TooFewValues {
            needed: MIN_TAIL_SAMPLE,
            got: n,
        });
    }

    let logs: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let mu = logs.iter().sum::<f64>() / n as f64;
    let sigma = (logs.iter().map(|l| (l - mu).powi(2)).sum::<f64>() / n as f64).sqrt();
    if sigma == 0.0 {
        return Err(DistError::Degenerate("constant sample"));
    }

    sort_f64(&mut xs);
    xs.reverse();
    let k = ((tail_fraction * n as f64).floor() as usize).clamp(1, n - 1);
    let x_min = xs[k];
    let log_excess: f64 = xs[..k].iter().map(|&x| (x / x_min).ln()).sum();
    if log_excess <= 0.0 {
        return Err(DistError::Degenerate("no spread above the tail cutoff"));
    }
    let alpha = k as f64 / log_excess;

    Ok(TailFit {
        mu: S::from_f64_lossy(mu),
        sigma: S::from_f64_lossy(sigma),
        alpha: S::from_f64_lossy(alpha),
        x_min: S::from_f64_lossy(x_min),
        tail_fraction,
        k,
        n,
        dropped,
    })
}
