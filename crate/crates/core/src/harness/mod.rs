//! Monte Carlo experiments: the simulation tables, the heavy-tail variance
//! scan and the sample-maximum demo.
//!
//! Every replicate draws its randomness from [`derive_stream`] keyed by the
//! master seed and the replicate index, and results are gathered in index
//! order before any reduction. Outputs are therefore identical for any
//! number of worker threads.

mod config;
mod report;
mod stream;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::generators::{gen_heavy_tail_log, gen_uniform, max_bootstrap_stat, ChainSpec};
use crate::moon::{
    bootstrap_quantile_in_place, choose_m, closed_form_variance, log_closed_form_variance,
    moon_resample, moon_weights, studentized_stat, MRule, MoonWeights, SubsampleSize,
};
use crate::numerics::{std_normal_cdf, SignedLog};
use crate::quantile::{ks_distance, sample_quantile, sort_sample, QuantileLevel, SortedSample};

pub use config::{configs_to_json, parse_config, parse_config_str};
pub use report::{
    emit_csv, emit_scan_csv, records_to_csv, scan_to_csv, CSV_HEADER, SCAN_CSV_HEADER,
};
pub use stream::{derive_stream, mix64, Stream};

pub const DEFAULT_REPLICATES: usize = 1000;

/// Retries allowed for a single replicate whose bootstrap variance is zero.
const MAX_DEGENERATE_RETRIES: u64 = 64;

/// One cell of a simulation table.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub n: usize,
    pub m_rule: MRule,
    /// Constant of the cube-root rule.
    pub c: f64,
    pub case: ChainSpec,
    pub replicates: usize,
    pub master_seed: u64,
    pub level: QuantileLevel,
}

impl TrialConfig {
    pub fn new(
        n: usize,
        m_rule: MRule,
        case: ChainSpec,
        replicates: usize,
        master_seed: u64,
    ) -> Self {
        Self {
            n,
            m_rule,
            c: 1.0,
            case,
            replicates,
            master_seed,
            level: QuantileLevel::MEDIAN,
        }
    }

    /// Checks the config and resolves the resample size.
    pub fn validate(&self) -> Result<SubsampleSize> {
        if self.replicates == 0 {
            return Err(invalid("B", "need at least one replicate"));
        }
        self.case.validate()?;
        if let MRule::Fixed(k) = self.m_rule {
            if k == 0 || k > self.n {
                return Err(invalid(
                    "m_rule",
                    format!("fixed m = {k} is outside [1, n = {}]", self.n),
                ));
            }
        }
        choose_m(self.n, self.m_rule, self.c)
    }
}

/// One row of a simulation table.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub n: usize,
    pub m_rule: MRule,
    pub m: usize,
    pub case: ChainSpec,
    pub mean_t: f64,
    pub var_t: f64,
    pub ks: f64,
    pub replicates: usize,
    pub master_seed: u64,
    /// Replicates that hit a zero bootstrap variance and were redrawn.
    pub degenerate_retries: usize,
}

impl TrialRecord {
    /// True when more than 1% of replicates needed a redraw.
    pub fn retries_notable(&self) -> bool {
        self.degenerate_retries * 100 > self.replicates
    }
}

/// A trial's record together with the raw `T` draws in replicate order.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub draws: Vec<f64>,
}

/// Runs `f` on a dedicated pool of `workers` threads (or the global pool).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(invalid("workers", "need at least one worker")),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| invalid("workers", e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// Stream index for `attempt` of `replicate`; attempt 0 is the replicate index itself.
fn attempt_index(replicate: u64, attempt: u64) -> u64 {
    replicate | (attempt << 40)
}

fn one_replicate(
    config: &TrialConfig,
    size: SubsampleSize,
    weights: &MoonWeights,
    replicate: u64,
) -> Result<(f64, usize)> {
    for attempt in 0..=MAX_DEGENERATE_RETRIES {
        let mut rng = derive_stream(config.master_seed, attempt_index(replicate, attempt));
        let series = config.case.generate(config.n, &mut rng)?;
        let sample = sort_sample(&series);
        let variance = closed_form_variance(&sample, weights, config.level)?;
        if variance.is_degenerate() {
            continue;
        }
        let mu_hat = sample_quantile(&sample, config.level);
        let mut resample = moon_resample(&sample, size, &mut rng);
        let mu_boot = bootstrap_quantile_in_place(&mut resample, config.level);
        let t = studentized_stat(mu_boot, mu_hat, variance, size.m())?;
        return Ok((t, attempt as usize));
    }
    Err(Error::DegenerateVariance)
}

/// Sum by recursive halving; the split points depend only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (lo, hi) = xs.split_at(xs.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Mean and unbiased variance (zero for a single value).
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    (mean, pairwise_sum(&dev) / (n - 1.0))
}

/// Unconditional sampling of `T`: each replicate generates a fresh series,
/// Studentizes with the closed-form variance and draws one resample.
pub fn run_trial(config: &TrialConfig) -> Result<TrialOutcome> {
    let size = config.validate()?;
    let weights = moon_weights(config.n, size, config.level)?;
    let results: Vec<Result<(f64, usize)>> = (0..config.replicates as u64)
        .into_par_iter()
        .map(|i| one_replicate(config, size, &weights, i))
        .collect();
    let mut draws = Vec::with_capacity(config.replicates);
    let mut retries = 0;
    for r in results {
        let (t, attempts) = r?;
        draws.push(t);
        retries += attempts;
    }
    let (mean_t, var_t) = mean_var(&draws);
    let ks = ks_distance(&draws, std_normal_cdf)?;
    Ok(TrialOutcome {
        record: TrialRecord {
            n: config.n,
            m_rule: config.m_rule,
            m: size.m(),
            case: config.case,
            mean_t,
            var_t,
            ks,
            replicates: config.replicates,
            master_seed: config.master_seed,
            degenerate_retries: retries,
        },
        draws,
    })
}

/// Runs every config in order. All configs are validated before the first
/// trial starts.
pub fn run_table(configs: &[TrialConfig]) -> Result<Vec<TrialRecord>> {
    if configs.is_empty() {
        return Err(Error::Empty);
    }
    for c in configs {
        c.validate()?;
    }
    configs
        .iter()
        .map(|c| run_trial(c).map(|o| o.record))
        .collect()
}

/// The cross product `n_list × m_rules × cases`, in that nesting order.
pub fn table_grid(
    n_list: &[usize],
    m_rules: &[MRule],
    cases: &[ChainSpec],
    replicates: usize,
    master_seed: u64,
) -> Vec<TrialConfig> {
    let mut out = Vec::with_capacity(n_list.len() * m_rules.len() * cases.len());
    for &n in n_list {
        for &rule in m_rules {
            for &case in cases {
                out.push(TrialConfig::new(n, rule, case, replicates, master_seed));
            }
        }
    }
    out
}

/// The three simulated mechanisms with default parameters.
pub fn table_cases() -> [ChainSpec; 3] {
    [
        ChainSpec::from_tag("gaussian").unwrap(),
        ChainSpec::from_tag("reflected-rw").unwrap(),
        ChainSpec::from_tag("mh-rw").unwrap(),
    ]
}

pub fn table_rules() -> [MRule; 3] {
    [MRule::Log, MRule::Cbrt, MRule::Sqrt]
}

/// Median closed-form variance over seeds at one sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub n: usize,
    pub m: usize,
    pub case: ChainSpec,
    pub seeds: usize,
    /// Median over seeds of `ln σ̂²`.
    pub median_log_variance: f64,
}

impl ScanRecord {
    /// `exp(median_log_variance)`; infinite once the variance leaves the `f64` range.
    pub fn median_variance(&self) -> f64 {
        self.median_log_variance.exp()
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn signed_log_sample<R: rand::Rng + ?Sized>(
    case: ChainSpec,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SignedLog>> {
    let mut values = match case {
        ChainSpec::HeavyTail { c } => gen_heavy_tail_log(n, c, rng)?,
        other => other
            .generate(n, rng)?
            .values()
            .iter()
            .map(|&x| SignedLog::from_f64(x))
            .collect(),
    };
    values.sort_by(SignedLog::total_cmp);
    Ok(values)
}

/// For each `n`, the median over `seeds` datasets of the closed-form
/// bootstrap variance, computed in log space.
pub fn run_heavy_tail_scan(
    n_list: &[usize],
    m_rule: MRule,
    seeds: usize,
    case: ChainSpec,
    master_seed: u64,
) -> Result<Vec<ScanRecord>> {
    if n_list.is_empty() {
        return Err(Error::Empty);
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("n_list", "sample sizes must be strictly ascending"));
    }
    if seeds == 0 {
        return Err(invalid("seeds", "need at least one seed"));
    }
    case.validate()?;
    let level = QuantileLevel::MEDIAN;
    let mut out = Vec::with_capacity(n_list.len());
    for (row, &n) in n_list.iter().enumerate() {
        let size = choose_m(n, m_rule, 1.0)?;
        let weights = moon_weights(n, size, level)?;
        let logs: Vec<f64> = (0..seeds as u64)
            .into_par_iter()
            .map(|s| {
                let mut rng = derive_stream(master_seed, ((row as u64) << 32) | s);
                let sorted = signed_log_sample(case, n, &mut rng)?;
                log_closed_form_variance(&sorted, &weights, level)
            })
            .collect::<Result<_>>()?;
        out.push(ScanRecord {
            n,
            m: size.m(),
            case,
            seeds,
            median_log_variance: median(logs),
        });
    }
    Ok(out)
}

/// `⌊n^{2/3}⌋`, computed exactly as the largest `m` with `m³ <= n²`.
pub fn two_thirds_m(n: usize) -> usize {
    let target = (n as u128) * (n as u128);
    let mut m = (n as f64).powf(2.0 / 3.0) as u128;
    while m * m * m > target {
        m -= 1;
    }
    while (m + 1) * (m + 1) * (m + 1) <= target {
        m += 1;
    }
    m as usize
}

/// Outcome of the sample-maximum bootstrap demo.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxDemoRecord {
    pub n: usize,
    pub m: usize,
    pub theta: f64,
    pub replicates: usize,
    /// Fraction of draws equal to zero (the resample contained the maximum).
    pub zero_fraction: f64,
    /// KS distance of the draws to Exp(θ).
    pub ks_to_exponential: f64,
    /// Mean of the draws, the maximum-likelihood exponential scale.
    pub scale_fit: f64,
}

/// Over `replicates` fresh Uniform(0, θ) datasets, one draw each of
/// `m (X_(n) - max resample)`.
pub fn run_max_demo(
    n: usize,
    theta: f64,
    m_rule: MRule,
    replicates: usize,
    master_seed: u64,
) -> Result<MaxDemoRecord> {
    if replicates == 0 {
        return Err(invalid("replicates", "need at least one replicate"));
    }
    ChainSpec::Uniform { theta }.validate()?;
    let size = choose_m(n, m_rule, 1.0)?;
    let draws: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = derive_stream(master_seed, i);
            let series = gen_uniform(n, theta, &mut rng)?;
            let sample = SortedSample::from_values(series.into_values())?;
            max_bootstrap_stat(&sample, size.m(), &mut rng)
        })
        .collect::<Result<_>>()?;
    let zeros = draws.iter().filter(|&&d| d == 0.0).count();
    let ks = ks_distance(&draws, |x| {
        if x <= 0.0 {
            0.0
        } else {
            -(-x / theta).exp_m1()
        }
    })?;
    Ok(MaxDemoRecord {
        n,
        m: size.m(),
        theta,
        replicates,
        zero_fraction: zeros as f64 / replicates as f64,
        ks_to_exponential: ks,
        scale_fit: pairwise_sum(&draws) / replicates as f64,
    })
}
