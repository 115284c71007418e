use std::f64::consts::PI;

use super::{quantile_sorted, sort_f64, DistError};
use crate::scalar::Scalar;

pub const DEFAULT_GRID_POINTS: usize = 512;

const MIN_VALUES: usize = 5;
const MAX_GRID_POINTS: usize = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KdeOptions {
    /// Overrides the Silverman bandwidth when set.
    pub bandwidth: Option<f64>,
    /// Minimum number of grid points; more are used if the grid step would
    /// exceed half a bandwidth.
    pub grid_points: usize,
    /// Grid padding beyond the sample range, in bandwidths.
    pub cut: f64,
}

impl Default for KdeOptions {
    fn default() -> Self {
        Self {
            bandwidth: None,
            grid_points: DEFAULT_GRID_POINTS,
            cut: 4.0,
        }
    }
}

/// Gaussian kernel density evaluated on an even grid.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityEstimate<S> {
    pub grid: Vec<S>,
    pub density: Vec<S>,
    pub bandwidth: S,
    /// Number of values the estimate was built from.
    pub n: usize,
}

impl<S: Scalar> DensityEstimate<S> {
    /// Trapezoidal integral of the density over the grid.
    pub fn integral(&self) -> S {
        self.grid
            .windows(2)
            .zip(self.density.windows(2))
            .map(|(x, y)| (x[1] - x[0]) * (y[0] + y[1]) / S::from_f64_lossy(2.0))
            .sum()
    }

    /// Grid points that are strict local maxima of the density.
    pub fn modes(&self) -> Vec<S> {
        self.density
            .windows(3)
            .enumerate()
            .filter(|(_, w)| w[1] > w[0] && w[1] > w[2])
            .map(|(i, _)| self.grid[i + 1])
            .collect()
    }
}

/// Silverman's rule of thumb, `0.9 · min(sd, IQR / 1.34) · n^(−1/5)`,
/// falling back to the standard deviation alone when the IQR is zero.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64, DistError> {
    let n = values.len();
    if n < 2 {
        return Err(DistError::TooFewValues { needed: 2, got: n });
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    if sd == 0.0 {
        return Err(DistError::Degenerate("constant sample"));
    }
    let mut sorted = values.to_vec();
    sort_f64(&mut sorted);
    let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

pub fn kde<S: Scalar>(values: &[Option<S>], options: KdeOptions) -> Result<DensityEstimate<S>, DistError> {
    let xs: Vec<f64> = values.iter().flatten().map(|v| v.to_f64_lossy()).collect();
    if xs.len() < MIN_VALUES {
        return Err(DistError::TooFewValues {
            needed: MIN_VALUES,
            got: xs.len(),
        });
    }
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if lo == hi {
        return Err(DistError::Degenerate("constant sample"));
    }
    let h = match options.bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => return Err(DistError::InvalidParameter(format!("bandwidth {h} must be positive"))),
        None => silverman_bandwidth(&xs)?,
    };
    if !(options.cut >= 0.0 && options.grid_points >= 2) {
        return Err(DistError::InvalidParameter("grid needs ≥ 2 points and a nonnegative cut".into()));
    }

    let start = lo - options.cut * h;
    let end = hi + options.cut * h;
    let needed = ((end - start) / (0.5 * h)).ceil() as usize + 1;
    let points = options.grid_points.max(needed).min(MAX_GRID_POINTS);
    let step = (end - start) / (points - 1) as f64;

    let norm = 1.0 / (xs.len() as f64 * h * (2.0 * PI).sqrt());
    let mut grid = Vec::with_capacity(points);
    let mut density = Vec::with_capacity(points);
    for k in 0..points {
        let x = if k == points - 1 { end } else { start + k as f64 * step };
        let sum: f64 = xs
            .iter()
            .map(|&xi| {
                let u = (x - xi) / h;
                (-0.5 * u * u).exp()
            })
            .sum();
        grid.push(S::from_f64_lossy(x));
        density.push(S::from_f64_lossy(sum * norm));
    }
    Ok(DensityEstimate {
        grid,
        density,
        bandwidth: S::from_f64_lossy(h),
        n: xs.len(),
    })
}
