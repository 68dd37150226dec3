//! Studentized m-out-of-n confidence intervals for the median and the 90th
//! percentile of simulated Gaussian data.
//!
//! cargo run --release --example confidence_interval -- [n] [seed]

use moonboot::generators::gen_gaussian_iid;
use moonboot::harness::derive_stream;
use moonboot::moon::{bootstrap_distribution, choose_m, moon_ci, moon_ci_at_estimate, MRule};
use moonboot::numerics::{std_normal_cdf, std_normal_inv};
use moonboot::quantile::{ks_distance, sample_quantile, sort_sample, QuantileLevel};

fn main() -> moonboot::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(10_000, |a| a.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |a| a.parse().expect("seed"));

    let sample = sort_sample(&gen_gaussian_iid(n, &mut derive_stream(seed, 0))?);
    let size = choose_m(n, MRule::Cbrt, 1.0)?;
    println!("n = {n}, m = {}", size.m());

    for p in [0.5, 0.9] {
        let level = QuantileLevel::new(p)?;
        let truth = std_normal_inv(p)?;
        let ci = moon_ci(&sample, level, size, 0.95, &mut derive_stream(seed, 1))?;
        let wide = moon_ci_at_estimate(&sample, level, size, 0.95)?;
        println!(
            "p = {p}: true quantile {truth:.4}, estimate {:.4}",
            sample_quantile(&sample, level)
        );
        println!("  bootstrap-centred 95% CI  [{:.4}, {:.4}]", ci.lo, ci.hi);
        println!(
            "  estimate-centred  95% CI  [{:.4}, {:.4}]",
            wide.lo, wide.hi
        );

        let draws =
            bootstrap_distribution(&sample, size, level, 2000, &mut derive_stream(seed, 2))?;
        let ks = ks_distance(&draws.t_values, std_normal_cdf)?;
        println!("  KS distance of 2000 bootstrap T draws to N(0,1): {ks:.4}");
    }
    Ok(())
}
