//! Data-generating processes for the experiments.
//!
//! Every generator is a deterministic function of its parameters and the
//! random stream it is handed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::numerics::SignedLog;
use crate::quantile::{ObservationSeries, SeriesKind, SortedSample};

pub const DEFAULT_STEP_SCALE: f64 = 0.1;
pub const DEFAULT_PROPOSAL_SCALE: f64 = 1.0;
pub const DEFAULT_BURN_IN: usize = 0;
pub const DEFAULT_THETA: f64 = 1.0;

/// `C = e²`, the default tail threshold of the heavy-tailed law.
pub fn default_heavy_tail_c() -> f64 {
    std::f64::consts::E * std::f64::consts::E
}

/// A data-generating process together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChainSpec {
    GaussianIid,
    HeavyTail { c: f64 },
    ReflectedRw { step_scale: f64 },
    Rwmh { proposal_scale: f64, burn_in: usize },
    MdpReward { step_scale: f64 },
    Uniform { theta: f64 },
}

impl ChainSpec {
    pub fn tag(&self) -> &'static str {
        match self {
            ChainSpec::GaussianIid => "gaussian",
            ChainSpec::HeavyTail { .. } => "heavy-tail",
            ChainSpec::ReflectedRw { .. } => "reflected-rw",
            ChainSpec::Rwmh { .. } => "mh-rw",
            ChainSpec::MdpReward { .. } => "mdp-reward",
            ChainSpec::Uniform { .. } => "uniform",
        }
    }

    /// Parses a case tag, filling in default parameters.
    pub fn from_tag(tag: &str) -> Result<Self> {
        Ok(match tag.trim() {
            "gaussian" => ChainSpec::GaussianIid,
            "heavy-tail" => ChainSpec::HeavyTail {
                c: default_heavy_tail_c(),
            },
            "reflected-rw" => ChainSpec::ReflectedRw {
                step_scale: DEFAULT_STEP_SCALE,
            },
            "mh-rw" => ChainSpec::Rwmh {
                proposal_scale: DEFAULT_PROPOSAL_SCALE,
                burn_in: DEFAULT_BURN_IN,
            },
            "mdp-reward" => ChainSpec::MdpReward {
                step_scale: DEFAULT_STEP_SCALE,
            },
            "uniform" => ChainSpec::Uniform {
                theta: DEFAULT_THETA,
            },
            other => {
                return Err(invalid(
                    "case",
                    format!(
                        "unknown case `{other}` (expected gaussian, heavy-tail, reflected-rw, \
                         mh-rw, mdp-reward or uniform)"
                    ),
                ))
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChainSpec::GaussianIid => Ok(()),
            ChainSpec::HeavyTail { c } => check_heavy_c(c),
            ChainSpec::ReflectedRw { step_scale } | ChainSpec::MdpReward { step_scale } => {
                check_step(step_scale)
            }
            ChainSpec::Rwmh { proposal_scale, .. } => {
                if proposal_scale > 0.0 && proposal_scale.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(
                        "proposal_scale",
                        format!("must be positive, got {proposal_scale}"),
                    ))
                }
            }
            ChainSpec::Uniform { theta } => check_theta(theta),
        }
    }

    pub fn kind(&self) -> SeriesKind {
        match self {
            ChainSpec::GaussianIid | ChainSpec::HeavyTail { .. } | ChainSpec::Uniform { .. } => {
                SeriesKind::Iid
            }
            _ => SeriesKind::MarkovChain,
        }
    }

    pub fn generate<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<ObservationSeries> {
        match *self {
            ChainSpec::GaussianIid => gen_gaussian_iid(n, rng),
            ChainSpec::HeavyTail { c } => gen_heavy_tail(n, c, rng),
            ChainSpec::ReflectedRw { step_scale } => gen_reflected_rw(n, step_scale, rng),
            ChainSpec::Rwmh {
                proposal_scale,
                burn_in,
            } => gen_rwmh(n, proposal_scale, burn_in, rng),
            ChainSpec::MdpReward { step_scale } => gen_mdp_rewards(n, step_scale, rng),
            ChainSpec::Uniform { theta } => gen_uniform(n, theta, rng),
        }
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ChainSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_tag(s)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(invalid("n", "series length must be at least 1"))
    } else {
        Ok(())
    }
}

fn check_heavy_c(c: f64) -> Result<()> {
    if c > std::f64::consts::E && c.is_finite() {
        Ok(())
    } else {
        Err(invalid(
            "C",
            format!("tail threshold must exceed e, got {c}"),
        ))
    }
}

fn check_step(step_scale: f64) -> Result<()> {
    if step_scale > 0.0 && step_scale < 2.0 {
        Ok(())
    } else {
        Err(invalid(
            "step_scale",
            format!("must lie in (0, 2), got {step_scale}"),
        ))
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(invalid("theta", format!("must be positive, got {theta}")))
    }
}

pub fn gen_gaussian_iid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ObservationSeries> {
    check_n(n)?;
    let values = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    ObservationSeries::new(values, SeriesKind::Iid)
}

// Heavy-tailed law:
//   F(x) = 1 - 1/(2 ln x)    for x > C
//   F(x) = 1/(2 ln |x|)      for x < -C
// and linear on [-C, C] through (0, 1/2).

/// Inverse CDF of the heavy-tailed law, as sign and log-magnitude.
pub fn heavy_tail_quantile_log(u: f64, c: f64) -> SignedLog {
    let tail = 1.0 / (2.0 * c.ln());
    if u > 1.0 - tail {
        SignedLog {
            negative: false,
            ln_abs: 1.0 / (2.0 * (1.0 - u)),
        }
    } else if u < tail {
        SignedLog {
            negative: true,
            ln_abs: 1.0 / (2.0 * u),
        }
    } else {
        SignedLog::from_f64(c * (u - 0.5) / (0.5 - tail))
    }
}

/// Inverse CDF of the heavy-tailed law; saturates at `±f64::MAX`.
pub fn heavy_tail_quantile(u: f64, c: f64) -> f64 {
    let x = heavy_tail_quantile_log(u, c).to_f64();
    x.clamp(-f64::MAX, f64::MAX)
}

/// CDF of the heavy-tailed law.
pub fn heavy_tail_cdf(x: f64, c: f64) -> f64 {
    let tail = 1.0 / (2.0 * c.ln());
    if x > c {
        1.0 - 1.0 / (2.0 * x.ln())
    } else if x < -c {
        1.0 / (2.0 * (-x).ln())
    } else {
        0.5 + x / c * (0.5 - tail)
    }
}

/// Heavy-tailed draws in sign/log-magnitude form, which never overflows.
/// Magnitudes of order `exp(n/2)` are typical for the sample extremes.
pub fn gen_heavy_tail_log<R: Rng + ?Sized>(
    n: usize,
    c: f64,
    rng: &mut R,
) -> Result<Vec<SignedLog>> {
    check_n(n)?;
    check_heavy_c(c)?;
    Ok((0..n)
        .map(|_| {
            let u: f64 = Open01.sample(rng);
            heavy_tail_quantile_log(u, c)
        })
        .collect())
}

/// Heavy-tailed draws as plain floats. Draws beyond the `f64` range are
/// saturated at `±f64::MAX`; use [`gen_heavy_tail_log`] when the extremes
/// matter.
pub fn gen_heavy_tail<R: Rng + ?Sized>(n: usize, c: f64, rng: &mut R) -> Result<ObservationSeries> {
    let values = gen_heavy_tail_log(n, c, rng)?
        .into_iter()
        .map(|s| s.to_f64().clamp(-f64::MAX, f64::MAX))
        .collect();
    ObservationSeries::new(values, SeriesKind::Iid)
}

/// Folds a real number into `[-1, 1]` by reflecting at the boundaries.
pub fn reflect(mut v: f64) -> f64 {
    while !(-1.0..=1.0).contains(&v) {
        v = if v > 1.0 { 2.0 - v } else { -2.0 - v };
    }
    v
}

fn reflected_walk<R: Rng + ?Sized>(n: usize, step_scale: f64, rng: &mut R) -> Vec<f64> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            let step: f64 = StandardNormal.sample(rng);
            x = reflect(x + step_scale * step);
            x
        })
        .collect()
}

/// Random walk with Gaussian steps of standard deviation `step_scale`,
/// reflected into `[-1, 1]`, started at 0.
pub fn gen_reflected_rw<R: Rng + ?Sized>(
    n: usize,
    step_scale: f64,
    rng: &mut R,
) -> Result<ObservationSeries> {
    check_n(n)?;
    check_step(step_scale)?;
    ObservationSeries::new(reflected_walk(n, step_scale, rng), SeriesKind::MarkovChain)
}

/// Acceptance probability `min(1, π(y)/π(x))` for the standard normal target
/// under a symmetric proposal.
pub fn rwmh_acceptance(x: f64, y: f64) -> f64 {
    (0.5 * (x * x - y * y)).min(0.0).exp()
}

fn laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u: f64 = Open01.sample(rng);
    let u = u - 0.5;
    -scale * u.signum() * (-2.0 * u.abs()).ln_1p()
}

/// A Metropolis–Hastings run and its acceptance rate.
#[derive(Debug, Clone)]
pub struct RwmhRun {
    pub series: ObservationSeries,
    pub acceptance_rate: f64,
}

/// Random-walk Metropolis–Hastings on a standard normal target with
/// Laplace(0, `proposal_scale`) increments, started at 0. The first
/// `burn_in` states are discarded.
pub fn gen_rwmh_run<R: Rng + ?Sized>(
    n: usize,
    proposal_scale: f64,
    burn_in: usize,
    rng: &mut R,
) -> Result<RwmhRun> {
    check_n(n)?;
    ChainSpec::Rwmh {
        proposal_scale,
        burn_in,
    }
    .validate()?;
    let mut x = 0.0f64;
    let mut accepted = 0usize;
    let mut values = Vec::with_capacity(n);
    for step in 0..burn_in + n {
        let y = x + laplace(proposal_scale, rng);
        let u: f64 = rng.random();
        if u < rwmh_acceptance(x, y) {
            x = y;
            accepted += 1;
        }
        if step >= burn_in {
            values.push(x);
        }
    }
    Ok(RwmhRun {
        series: ObservationSeries::new(values, SeriesKind::MarkovChain)?,
        acceptance_rate: accepted as f64 / (burn_in + n) as f64,
    })
}

pub fn gen_rwmh<R: Rng + ?Sized>(
    n: usize,
    proposal_scale: f64,
    burn_in: usize,
    rng: &mut R,
) -> Result<ObservationSeries> {
    gen_rwmh_run(n, proposal_scale, burn_in, rng).map(|run| run.series)
}

/// Affine reward `r(x) = (x + 1) / 2`, mapping `[-1, 1]` onto `[0, 1]`.
pub fn reward_map(state: f64) -> f64 {
    0.5 * (state + 1.0)
}

/// Rewards `r(X_i)` along a reflected random walk on `[-1, 1]`.
pub fn gen_mdp_rewards<R: Rng + ?Sized>(
    n: usize,
    step_scale: f64,
    rng: &mut R,
) -> Result<ObservationSeries> {
    check_n(n)?;
    check_step(step_scale)?;
    let rewards = reflected_walk(n, step_scale, rng)
        .into_iter()
        .map(reward_map)
        .collect();
    ObservationSeries::new(rewards, SeriesKind::MarkovChain)
}

/// I.i.d. Uniform(0, θ) draws.
pub fn gen_uniform<R: Rng + ?Sized>(
    n: usize,
    theta: f64,
    rng: &mut R,
) -> Result<ObservationSeries> {
    check_n(n)?;
    check_theta(theta)?;
    let values = (0..n).map(|_| theta * rng.random::<f64>()).collect();
    ObservationSeries::new(values, SeriesKind::Iid)
}

/// `m (X_(n) - max of an m-resample)`, the bootstrap analogue of the scaled
/// sample-maximum gap.
pub fn max_bootstrap_stat<R: Rng + ?Sized>(
    sample: &SortedSample,
    m: usize,
    rng: &mut R,
) -> Result<f64> {
    let n = sample.len();
    if m == 0 || m > n {
        return Err(invalid("m", format!("must lie in [1, {n}], got {m}")));
    }
    // The sample is sorted, so the resample maximum sits at the largest index drawn.
    let top = (0..m).map(|_| rng.random_range(0..n)).max().unwrap_or(0);
    Ok(m as f64 * (sample.max() - sample.as_slice()[top]))
}
