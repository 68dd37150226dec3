//! Command-line front end. The `moonboot` binary is a thin wrapper over [`run`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::edgeworth::{binomial_edgeworth_cdf, quantile_edgeworth_cdf, DensityHandle};
use crate::error::{invalid, Result};
use crate::generators::{default_heavy_tail_c, ChainSpec, DEFAULT_THETA};
use crate::harness::{
    derive_stream, emit_csv, parse_config, records_to_csv, run_heavy_tail_scan, run_max_demo,
    run_table, run_trial, scan_to_csv, two_thirds_m, with_workers, TrialConfig, TrialRecord,
    DEFAULT_REPLICATES,
};
use crate::io::{fmt_f64, read_series, write_atomic, write_series};
use crate::moon::{choose_m, moon_ci, moon_ci_at_estimate, moon_weights, MRule, SubsampleSize};
use crate::quantile::{sample_quantile, QuantileLevel, SortedSample};

#[derive(Debug, Parser)]
#[command(
    name = "moonboot",
    version,
    about = "m-out-of-n bootstrap for sample quantiles"
)]
pub struct Cli {
    /// Worker threads; defaults to the number of cores. Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo distribution of the Studentized bootstrap quantile for one cell.
    Simulate(SimulateArgs),
    /// Run every cell of a JSON config and write the results table.
    Table(TableArgs),
    /// Confidence interval for a quantile of the series in a file.
    Ci(CiArgs),
    /// Print the bootstrap weights W_{m,j}, j = 1..n, as CSV.
    Weights(WeightsArgs),
    /// Evaluate an Edgeworth approximation at one point.
    Edgeworth(EdgeworthArgs),
    /// Bootstrap of the sample maximum of Uniform(0, θ) data.
    Maxdemo(MaxDemoArgs),
    /// Median closed-form bootstrap variance over seeds, per sample size.
    HeavyScan(HeavyScanArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "cbrt")]
    pub m_rule: MRule,
    /// Constant of the cube-root rule.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// gaussian, heavy-tail, reflected-rw, mh-rw, mdp-reward or uniform.
    #[arg(long, default_value = "gaussian")]
    pub case: String,
    #[arg(long, short = 'B', default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    /// Write the CSV row here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the raw T draws, one per line.
    #[arg(long)]
    pub dump_draws: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    /// One observation per line; `#` starts a comment.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value = "cbrt")]
    pub m_rule: MRule,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Confidence level.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,
    /// Seed of the bootstrap draw the interval is centred on.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Centre the interval at the full-sample quantile instead of a bootstrap draw.
    #[arg(long)]
    pub at_estimate: bool,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
}

#[derive(Debug, Args)]
pub struct EdgeworthArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub p: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    /// Density at the quantile; selects the quantile expansion (with --fprime-mu).
    #[arg(long, requires = "fprime_mu")]
    pub f_mu: Option<f64>,
    #[arg(long, requires = "f_mu", allow_hyphen_values = true)]
    pub fprime_mu: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MaxDemoArgs {
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Resample size rule; defaults to fixed:⌊n^{2/3}⌋.
    #[arg(long)]
    pub m_rule: Option<MRule>,
    #[arg(long, short = 'B', default_value_t = 2000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct HeavyScanArgs {
    /// Comma-separated ascending sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
    pub n_list: Vec<usize>,
    #[arg(long, default_value = "fixed:9")]
    pub m_rule: MRule,
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Tail threshold; defaults to e².
    #[arg(long = "C")]
    pub tail_c: Option<f64>,
    /// Scan Gaussian data instead, as a baseline.
    #[arg(long)]
    pub gaussian: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn warn_retries(records: &[TrialRecord], err: &mut dyn Write) -> Result<()> {
    for r in records.iter().filter(|r| r.retries_notable()) {
        writeln!(
            err,
            "warning: n={} m_rule={} case={}: {} of {} replicates redrawn after a zero variance",
            r.n,
            r.m_rule,
            r.case.tag(),
            r.degenerate_retries,
            r.replicates
        )?;
    }
    Ok(())
}

fn simulate(a: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let config = TrialConfig {
        n: a.n,
        m_rule: a.m_rule,
        c: a.c,
        case: a.case.parse()?,
        replicates: a.replicates,
        master_seed: a.seed,
        level: QuantileLevel::new(a.p)?,
    };
    let outcome = run_trial(&config)?;
    let records = [outcome.record];
    warn_retries(&records, err)?;
    if let Some(path) = &a.dump_draws {
        write_series(path, &outcome.draws)?;
    }
    emit(out, a.out.as_deref(), &records_to_csv(&records))
}

fn table(a: TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let configs = parse_config(&a.config)?;
    let records = run_table(&configs)?;
    warn_retries(&records, err)?;
    match &a.out {
        Some(p) => emit_csv(&records, p),
        None => emit(out, None, &records_to_csv(&records)),
    }
}

fn ci(a: CiArgs, out: &mut dyn Write) -> Result<()> {
    let sample = SortedSample::from_values(read_series(&a.input)?)?;
    let level = QuantileLevel::new(a.p)?;
    let size = choose_m(sample.len(), a.m_rule, a.c)?;
    let interval = if a.at_estimate {
        moon_ci_at_estimate(&sample, level, size, a.level)?
    } else {
        moon_ci(&sample, level, size, a.level, &mut derive_stream(a.seed, 0))?
    };
    writeln!(out, "estimate,centre,lo,hi,n,m,level")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        fmt_f64(sample_quantile(&sample, level)),
        fmt_f64(interval.centre),
        fmt_f64(interval.lo),
        fmt_f64(interval.hi),
        sample.len(),
        size.m(),
        a.level
    )?;
    Ok(())
}

fn weights(a: WeightsArgs, out: &mut dyn Write) -> Result<()> {
    let size = SubsampleSize::new(a.m, a.n)?;
    let w = moon_weights(a.n, size, QuantileLevel::new(a.p)?)?;
    let mut text = String::from("j,W\n");
    for (j, wj) in w.weights().iter().enumerate() {
        text.push_str(&format!("{},{}\n", j + 1, fmt_f64(*wj)));
    }
    emit(out, None, &text)
}

fn edgeworth(a: EdgeworthArgs, out: &mut dyn Write) -> Result<()> {
    let value = match (a.f_mu, a.fprime_mu) {
        (Some(f), Some(fp)) => {
            let density = DensityHandle::new(f, fp, QuantileLevel::new(a.p)?)?;
            let m = usize::try_from(a.m).map_err(|_| invalid("m", "too large"))?;
            quantile_edgeworth_cdf(a.t, m, &density)?
        }
        _ => binomial_edgeworth_cdf(a.m, a.p, a.t)?,
    };
    writeln!(out, "{}", fmt_f64(value))?;
    Ok(())
}

fn maxdemo(a: MaxDemoArgs, out: &mut dyn Write) -> Result<()> {
    let rule = a.m_rule.unwrap_or_else(|| MRule::Fixed(two_thirds_m(a.n)));
    let rec = run_max_demo(a.n, a.theta, rule, a.replicates, a.seed)?;
    writeln!(out, "n,m,theta,B,zero_fraction,ks_exponential,scale_fit")?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        rec.n,
        rec.m,
        fmt_f64(rec.theta),
        rec.replicates,
        fmt_f64(rec.zero_fraction),
        fmt_f64(rec.ks_to_exponential),
        fmt_f64(rec.scale_fit)
    )?;
    Ok(())
}

fn heavy_scan(a: HeavyScanArgs, out: &mut dyn Write) -> Result<()> {
    let case = if a.gaussian {
        if a.tail_c.is_some() {
            return Err(invalid("C", "does not apply with --gaussian"));
        }
        ChainSpec::GaussianIid
    } else {
        ChainSpec::HeavyTail {
            c: a.tail_c.unwrap_or_else(default_heavy_tail_c),
        }
    };
    let records = run_heavy_tail_scan(&a.n_list, a.m_rule, a.seeds, case, a.seed)?;
    emit(out, a.out.as_deref(), &scan_to_csv(&records))
}

/// Executes a parsed command line, writing results to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let workers = cli.workers;
    let command = cli.command;
    let mut buf = Vec::new();
    let mut warn = Vec::new();
    with_workers(workers, || match command {
        Command::Simulate(a) => simulate(a, &mut buf, &mut warn),
        Command::Table(a) => table(a, &mut buf, &mut warn),
        Command::Ci(a) => ci(a, &mut buf),
        Command::Weights(a) => weights(a, &mut buf),
        Command::Edgeworth(a) => edgeworth(a, &mut buf),
        Command::Maxdemo(a) => maxdemo(a, &mut buf),
        Command::HeavyScan(a) => heavy_scan(a, &mut buf),
    })??;
    err.write_all(&warn)?;
    out.write_all(&buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("moonboot").chain(args.iter().copied()))
            .expect("arguments parse");
        let mut out = Vec::new();
        run(cli, &mut out, &mut std::io::sink())?;
        Ok(String::from_utf8(out).unwrap())
    }

    #[test]
    fn weights_csv() {
        let text = run_args(&["weights", "--n", "3", "--m", "3"]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "j,W");
        assert_eq!(lines.len(), 4);
        let w: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert!((w - 7.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn edgeworth_both_forms() {
        let b: f64 = run_args(&["edgeworth", "--m", "50", "--p", "0.3", "--t", "0"])
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert!((b - 0.508208).abs() < 5e-7);
        let q: f64 = run_args(&[
            "edgeworth",
            "--m",
            "100",
            "--p",
            "0.5",
            "--t",
            "1",
            "--f-mu",
            "0.5",
            "--fprime-mu",
            "-0.5",
        ])
        .unwrap()
        .trim()
        .parse()
        .unwrap();
        assert!((q - 0.829246).abs() < 5e-7);
    }

    #[test]
    fn bad_arguments_surface_as_errors() {
        assert!(run_args(&["weights", "--n", "3", "--m", "4"]).is_err());
        assert!(run_args(&["simulate", "--n", "100", "--case", "cauchy", "-B", "5"]).is_err());
        assert!(run_args(&["simulate", "--n", "100", "-B", "5", "--workers", "0"]).is_err());
    }
}
