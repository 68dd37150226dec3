//! The m-out-of-n bootstrap for a sample quantile.
//!
//! A resample draws `m` values i.i.d. from the empirical distribution of the
//! `n` observations (with replacement). Its quantile is the `k`-th order
//! statistic with `k = ⌊mp⌋ + 1`, so the probability that it equals `X_(j)`
//! is the incomplete-beta increment
//!
//! ```text
//! W_{m,j} = I_{j/n}(k, m-k+1) - I_{(j-1)/n}(k, m-k+1).
//! ```
//!
//! These weights give the bootstrap variance in closed form,
//! `σ̂² = m Σ_j (X_(j) - X_(r))² W_{m,j}` with `r = ⌊np⌋ + 1`, which
//! Studentizes `√m (μ̂_m - μ̂_n)` without any nested resampling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::numerics::{incomplete_beta_pair, log_sum_exp, std_normal_inv, BetaParams, SignedLog};
use crate::quantile::{sample_quantile, QuantileLevel, SortedSample};

/// How the resample size `m` is derived from `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MRule {
    /// `⌊ln n⌋`
    Log,
    /// `⌊c · n^{1/3}⌋`
    Cbrt,
    /// `⌊√n⌋`
    Sqrt,
    /// A fixed `m`, clamped to `[1, n]`.
    Fixed(usize),
}

impl fmt::Display for MRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MRule::Log => f.write_str("log"),
            MRule::Cbrt => f.write_str("cbrt"),
            MRule::Sqrt => f.write_str("sqrt"),
            MRule::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

impl FromStr for MRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "log" => Ok(MRule::Log),
            "cbrt" => Ok(MRule::Cbrt),
            "sqrt" => Ok(MRule::Sqrt),
            other => {
                let k = other
                    .strip_prefix("fixed:")
                    .and_then(|k| k.trim().parse::<usize>().ok())
                    .ok_or_else(|| {
                        invalid(
                            "m_rule",
                            format!("expected log, cbrt, sqrt or fixed:K, got `{other}`"),
                        )
                    })?;
                Ok(MRule::Fixed(k))
            }
        }
    }
}

/// Resample size `m`, with `1 <= m <= n` checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsampleSize {
    m: usize,
}

impl SubsampleSize {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m", "resample size must be at least 1"));
        }
        if m > n {
            return Err(invalid("m", format!("resample size {m} exceeds n = {n}")));
        }
        Ok(Self { m })
    }

    pub fn m(self) -> usize {
        self.m
    }

    /// Rank of the bootstrap quantile inside a resample, `⌊mp⌋ + 1`.
    pub fn k(self, level: QuantileLevel) -> usize {
        level.lattice_floor(self.m) + 1
    }
}

/// Applies `rule` to a sample of size `n`; `c` scales the cube-root rule.
pub fn choose_m(n: usize, rule: MRule, c: f64) -> Result<SubsampleSize> {
    if n < 2 {
        return Err(invalid(
            "n",
            format!("need at least 2 observations, got {n}"),
        ));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("c", format!("must be positive, got {c}")));
    }
    let nf = n as f64;
    let m = match rule {
        MRule::Log => nf.ln().floor(),
        MRule::Cbrt => (c * nf.cbrt()).floor(),
        MRule::Sqrt => (n.isqrt()) as f64,
        MRule::Fixed(k) => k.clamp(1, n) as f64,
    };
    if m < 1.0 {
        return Err(invalid(
            "m_rule",
            format!("rule `{rule}` gives m < 1 for n = {n}"),
        ));
    }
    SubsampleSize::new(m as usize, n)
}

/// Draws `m` values i.i.d. from the empirical distribution of `sample`.
pub fn moon_resample<R: Rng + ?Sized>(
    sample: &SortedSample,
    size: SubsampleSize,
    rng: &mut R,
) -> Vec<f64> {
    let data = sample.as_slice();
    (0..size.m())
        .map(|_| data[rng.random_range(0..data.len())])
        .collect()
}

/// The `k`-th smallest resampled value, `k = ⌊mp⌋ + 1`.
pub fn bootstrap_quantile(resample: &[f64], level: QuantileLevel) -> Result<f64> {
    if resample.is_empty() {
        return Err(Error::Empty);
    }
    let mut scratch = resample.to_vec();
    Ok(bootstrap_quantile_in_place(&mut scratch, level))
}

/// As [`bootstrap_quantile`], reordering `resample` instead of copying it.
pub fn bootstrap_quantile_in_place(resample: &mut [f64], level: QuantileLevel) -> f64 {
    let k = level.lattice_floor(resample.len()) + 1;
    let (_, kth, _) = resample.select_nth_unstable_by(k - 1, f64::total_cmp);
    *kth
}

/// Probabilities `W_{m,j}` that the bootstrap quantile equals `X_(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoonWeights {
    n: usize,
    m: usize,
    k: usize,
    level: QuantileLevel,
    weights: Vec<f64>,
}

impl MoonWeights {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self) -> QuantileLevel {
        self.level
    }

    /// `weights()[j - 1] = W_{m,j}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Closed-form weights as incomplete-beta increments over `[(j-1)/n, j/n]`.
///
/// Below the mean of the `Beta(k, m-k+1)` law the increments are taken on
/// the lower tail, above it on the upper tail, so no increment is the small
/// difference of two numbers close to one.
pub fn moon_weights(n: usize, size: SubsampleSize, level: QuantileLevel) -> Result<MoonWeights> {
    let m = size.m();
    if m > n {
        return Err(invalid("m", format!("resample size {m} exceeds n = {n}")));
    }
    let k = size.k(level);
    let a = k as f64;
    let b = (m - k + 1) as f64;
    let centre = a / (a + b);
    let nf = n as f64;

    let mut tails = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = if j == n { 1.0 } else { j as f64 / nf };
        tails.push(incomplete_beta_pair(BetaParams::new(a, b, x)?)?);
    }
    let weights = (1..=n)
        .map(|j| {
            let (lo_prev, up_prev) = tails[j - 1];
            let (lo, up) = tails[j];
            let w = if (j as f64 / nf) <= centre {
                lo - lo_prev
            } else {
                up_prev - up
            };
            w.max(0.0)
        })
        .collect();
    Ok(MoonWeights {
        n,
        m,
        k,
        level,
        weights,
    })
}

/// `(σ̂_m)² = m Σ_j (X_(j) - X_(r))² W_{m,j}` and its centering index `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapVariance {
    pub sigma2: f64,
    pub r: usize,
}

impl BootstrapVariance {
    /// `σ̂_m`, the Studentizing scale of `√m (μ̂_m - μ̂_n)`.
    pub fn sd(&self) -> f64 {
        self.sigma2.sqrt()
    }

    pub fn is_degenerate(&self) -> bool {
        self.sigma2 == 0.0
    }
}

fn check_weights(n: usize, weights: &MoonWeights, level: QuantileLevel) -> Result<()> {
    if weights.n != n {
        return Err(Error::Mismatch(format!(
            "weights were built for n = {}, sample has n = {n}",
            weights.n
        )));
    }
    if weights.level != level {
        return Err(Error::Mismatch(format!(
            "weights were built for p = {}, requested p = {}",
            weights.level.value(),
            level.value()
        )));
    }
    Ok(())
}

/// Second moment of the bootstrap quantile about `X_(r)`, scaled by `m`.
pub fn closed_form_variance(
    sample: &SortedSample,
    weights: &MoonWeights,
    level: QuantileLevel,
) -> Result<BootstrapVariance> {
    check_weights(sample.len(), weights, level)?;
    let r = level.lattice_floor(sample.len()) + 1;
    let centre = sample.order_stat(r);
    let sum: f64 = sample
        .as_slice()
        .iter()
        .zip(&weights.weights)
        .map(|(&x, &w)| {
            let d = x - centre;
            d * d * w
        })
        .sum();
    Ok(BootstrapVariance {
        sigma2: weights.m as f64 * sum,
        r,
    })
}

/// `ln σ̂²` for a sample given as sign/log-magnitude pairs in ascending order.
///
/// Heavy-tailed data can place order statistics far outside the `f64`
/// range; this evaluates the same sum as [`closed_form_variance`] with a
/// log-sum-exp. Zero weights contribute nothing.
pub fn log_closed_form_variance(
    sorted: &[SignedLog],
    weights: &MoonWeights,
    level: QuantileLevel,
) -> Result<f64> {
    check_weights(sorted.len(), weights, level)?;
    let r = level.lattice_floor(sorted.len()) + 1;
    let centre = sorted[r - 1];
    let terms = sorted
        .iter()
        .zip(&weights.weights)
        .filter(|(_, &w)| w > 0.0)
        .map(move |(x, &w)| 2.0 * x.ln_abs_diff(centre) + w.ln());
    Ok((weights.m as f64).ln() + log_sum_exp(terms))
}

/// `T = √m (μ̂_m - μ̂_n) / σ̂_m`.
pub fn studentized_stat(
    mu_boot: f64,
    mu_hat_n: f64,
    variance: BootstrapVariance,
    m: usize,
) -> Result<f64> {
    if variance.is_degenerate() {
        return Err(Error::DegenerateVariance);
    }
    Ok((m as f64).sqrt() * (mu_boot - mu_hat_n) / variance.sd())
}

/// A two-sided confidence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ci {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub centre: f64,
}

impl Ci {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

fn check_conf(conf: f64) -> Result<f64> {
    if conf > 0.0 && conf < 1.0 {
        std_normal_inv(0.5 * (1.0 + conf))
    } else {
        Err(invalid("conf", format!("must lie in (0, 1), got {conf}")))
    }
}

/// Interval `μ̂_m ± z σ̂_m / √m` around one bootstrap quantile `μ̂_m` drawn
/// from `rng`, with `z = Φ⁻¹((1 + conf)/2)`.
///
/// Because `√m (μ̂_m - μ̂_n) / σ̂_m` is asymptotically standard normal the
/// interval holds `μ̂_n` (and, for `m = o(n)`, the population quantile) with
/// probability close to `conf`. A zero variance yields `[μ̂_n, μ̂_n]`.
pub fn moon_ci<R: Rng + ?Sized>(
    sample: &SortedSample,
    level: QuantileLevel,
    size: SubsampleSize,
    conf: f64,
    rng: &mut R,
) -> Result<Ci> {
    let z = check_conf(conf)?;
    let weights = moon_weights(sample.len(), size, level)?;
    let variance = closed_form_variance(sample, &weights, level)?;
    let mu_hat = sample_quantile(sample, level);
    if variance.is_degenerate() {
        return Ok(Ci {
            lo: mu_hat,
            hi: mu_hat,
            level: conf,
            centre: mu_hat,
        });
    }
    let mut resample = moon_resample(sample, size, rng);
    let centre = bootstrap_quantile_in_place(&mut resample, level);
    let half = z * variance.sd() / (size.m() as f64).sqrt();
    Ok(Ci {
        lo: centre - half,
        hi: centre + half,
        level: conf,
        centre,
    })
}

/// Interval `μ̂_n ± z σ̂_m / √m` centred at the full-sample estimate.
///
/// Its width is set by the resample size `m`, not `n`, so as a statement
/// about the population quantile it is conservative.
pub fn moon_ci_at_estimate(
    sample: &SortedSample,
    level: QuantileLevel,
    size: SubsampleSize,
    conf: f64,
) -> Result<Ci> {
    let z = check_conf(conf)?;
    let weights = moon_weights(sample.len(), size, level)?;
    let variance = closed_form_variance(sample, &weights, level)?;
    let mu_hat = sample_quantile(sample, level);
    let half = z * variance.sd() / (size.m() as f64).sqrt();
    Ok(Ci {
        lo: mu_hat - half,
        hi: mu_hat + half,
        level: conf,
        centre: mu_hat,
    })
}

/// Monte Carlo draws of the Studentized statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct StudentizedDraws {
    pub t_values: Vec<f64>,
    pub m: usize,
}

impl StudentizedDraws {
    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }
}

/// `replicates` draws of `T` conditional on one dataset: the sample, its
/// quantile and its closed-form variance stay fixed, only the resample varies.
pub fn bootstrap_distribution<R: Rng + ?Sized>(
    sample: &SortedSample,
    size: SubsampleSize,
    level: QuantileLevel,
    replicates: usize,
    rng: &mut R,
) -> Result<StudentizedDraws> {
    if replicates == 0 {
        return Err(invalid("replicates", "need at least one replicate"));
    }
    let weights = moon_weights(sample.len(), size, level)?;
    let variance = closed_form_variance(sample, &weights, level)?;
    if variance.is_degenerate() {
        return Err(Error::DegenerateVariance);
    }
    let mu_hat = sample_quantile(sample, level);
    let mut t_values = Vec::with_capacity(replicates);
    for _ in 0..replicates {
        let mut resample = moon_resample(sample, size, rng);
        let mu_boot = bootstrap_quantile_in_place(&mut resample, level);
        t_values.push(studentized_stat(mu_boot, mu_hat, variance, size.m())?);
    }
    Ok(StudentizedDraws {
        t_values,
        m: size.m(),
    })
}
