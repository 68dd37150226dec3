//! Intervals for the median of Markov chain output: a random-walk
//! Metropolis–Hastings sampler and rewards along a reflected random walk.
//!
//! cargo run --release --example markov_median

use moonboot::generators::{gen_mdp_rewards, gen_rwmh_run};
use moonboot::harness::derive_stream;
use moonboot::moon::{choose_m, moon_ci, MRule};
use moonboot::quantile::{sample_quantile, sort_sample, QuantileLevel};

fn main() -> moonboot::Result<()> {
    let n = 20_000;
    let level = QuantileLevel::MEDIAN;
    let size = choose_m(n, MRule::Cbrt, 1.0)?;

    let run = gen_rwmh_run(n, 1.0, 500, &mut derive_stream(11, 0))?;
    let chain = sort_sample(&run.series);
    let ci = moon_ci(&chain, level, size, 0.95, &mut derive_stream(11, 1))?;
    println!("RWMH on N(0,1), acceptance rate {:.3}", run.acceptance_rate);
    println!(
        "  median {:.4}, 95% CI [{:.4}, {:.4}] (target median 0)",
        sample_quantile(&chain, level),
        ci.lo,
        ci.hi
    );

    let rewards = sort_sample(&gen_mdp_rewards(n, 0.1, &mut derive_stream(12, 0))?);
    let ci = moon_ci(&rewards, level, size, 0.95, &mut derive_stream(12, 1))?;
    println!("Rewards r(x) = (x + 1)/2 along a reflected walk on [-1, 1]");
    println!(
        "  median {:.4}, 95% CI [{:.4}, {:.4}] (stationary median 0.5)",
        sample_quantile(&rewards, level),
        ci.lo,
        ci.hi
    );
    Ok(())
}
