use super::{Statistic, StatsError};
use crate::ingest::Year;
use crate::scalar::Scalar;

/// Population moments of the defined entries of a vector.
///
/// `skewness` and `kurtosis` are the third and fourth standardized moments
/// (kurtosis is not excess-corrected, so a normal sample gives ≈ 3). Both
/// are `None` when the values are constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments<S> {
    pub mean: S,
    pub std: S,
    pub skewness: Option<S>,
    pub kurtosis: Option<S>,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSummary<S> {
    pub statistic: Statistic,
    pub year: Year,
    pub moments: Moments<S>,
}

pub fn moments<S: Scalar>(values: &[Option<S>]) -> Result<Moments<S>, StatsError> {
    let defined: Vec<S> = values.iter().flatten().copied().collect();
    let count = defined.len();
    if count < 2 {
        return Err(StatsError::TooFewValues { needed: 2, got: count });
    }
    let n = S::from_count(count);

    if defined.iter().all(|&v| v == defined[0]) {
        return Ok(Moments {
            mean: defined[0],
            std: S::zero(),
            skewness: None,
            kurtosis: None,
            count,
        });
    }

    let mean = defined.iter().copied().sum::<S>() / n;
    let (mut m2, mut m3, mut m4) = (S::zero(), S::zero(), S::zero());
    for &v in &defined {
        let d = v - mean;
        let d2 = d * d;
        m2 = m2 + d2;
        m3 = m3 + d2 * d;
        m4 = m4 + d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let std = m2.sqrt();
    Ok(Moments {
        mean,
        std,
        skewness: Some(m3 / (m2 * std)),
        kurtosis: Some(m4 / (m2 * m2)),
        count,
    })
}
