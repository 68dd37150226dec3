//! Order statistics, the empirical CDF, sample quantiles and the one-sample
//! Kolmogorov–Smirnov distance.

use crate::error::{invalid, Error, Result};

/// Whether a series was drawn independently or as a Markov chain path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Iid,
    MarkovChain,
}

/// Observations in time order. Every value is finite and there is at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSeries {
    values: Vec<f64>,
    kind: SeriesKind,
}

impl ObservationSeries {
    pub fn new(values: Vec<f64>, kind: SeriesKind) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { values, kind })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }
}

/// A sample in ascending order; position `i` (zero-based) holds `X_(i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    sorted: Vec<f64>,
}

impl SortedSample {
    /// Sorts arbitrary finite values.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { sorted: values })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// The `j`-th order statistic `X_(j)`, one-based.
    pub fn order_stat(&self, j: usize) -> f64 {
        assert!(
            j >= 1 && j <= self.sorted.len(),
            "order statistic {j} out of range"
        );
        self.sorted[j - 1]
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }
}

/// Quantile level `p` in the open unit interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct QuantileLevel(f64);

impl QuantileLevel {
    pub const MEDIAN: QuantileLevel = QuantileLevel(0.5);

    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p < 1.0 {
            Ok(Self(p))
        } else {
            Err(invalid(
                "p",
                format!("quantile level must lie in (0, 1), got {p}"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `⌊count·p⌋`, evaluated on the lattice `j / count` so that e.g.
    /// `⌊100 · 0.29⌋ = 29` despite `100.0 * 0.29 < 29.0` in floating point.
    pub fn lattice_floor(self, count: usize) -> usize {
        let n = count as f64;
        let mut j = (n * self.0).floor() as usize;
        while j < count && (j + 1) as f64 / n <= self.0 {
            j += 1;
        }
        while j > 0 && j as f64 / n > self.0 {
            j -= 1;
        }
        j
    }

    /// `⌈count·p⌉`, the smallest `j` with `j / count >= p`.
    pub fn lattice_ceil(self, count: usize) -> usize {
        let n = count as f64;
        let mut j = ((n * self.0).ceil() as usize).clamp(1, count);
        while j > 1 && (j - 1) as f64 / n >= self.0 {
            j -= 1;
        }
        while j < count && (j as f64 / n) < self.0 {
            j += 1;
        }
        j
    }
}

/// Stable ascending sort of a validated series.
pub fn sort_sample(series: &ObservationSeries) -> SortedSample {
    let mut sorted = series.values.clone();
    sorted.sort_by(f64::total_cmp);
    SortedSample { sorted }
}

/// `F̄(t) = #{i : X_i <= t} / n`.
pub fn empirical_cdf(sample: &SortedSample, t: f64) -> f64 {
    let count = sample.sorted.partition_point(|&x| x <= t);
    count as f64 / sample.len() as f64
}

/// `inf{t : F̄(t) >= p}`, i.e. `X_(⌈np⌉)`.
pub fn sample_quantile(sample: &SortedSample, level: QuantileLevel) -> f64 {
    sample.order_stat(level.lattice_ceil(sample.len()))
}

/// One-sample Kolmogorov–Smirnov distance `sup_t |F̂(t) - F(t)|` between the
/// empirical law of `draws` and `reference_cdf`.
pub fn ks_distance<F>(draws: &[f64], reference_cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if draws.is_empty() {
        return Err(Error::Empty);
    }
    if let Some((index, &value)) = draws.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::NonFinite { index, value });
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let b = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = reference_cdf(x);
            let above = (i + 1) as f64 / b - f;
            let below = f - i as f64 / b;
            above.max(below)
        })
        .fold(0.0f64, f64::max);
    Ok(d.clamp(0.0, 1.0))
}
