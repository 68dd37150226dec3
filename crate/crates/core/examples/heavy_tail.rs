//! The bootstrap variance of the median diverges for very heavy tails.
//!
//! The values overflow `f64` quickly, so the scan works with logarithms.
//!
//! cargo run --release --example heavy_tail

use moonboot::generators::{default_heavy_tail_c, ChainSpec};
use moonboot::harness::run_heavy_tail_scan;
use moonboot::moon::MRule;

fn main() -> moonboot::Result<()> {
    let ns = [100, 1_000, 10_000, 100_000];
    let heavy = ChainSpec::HeavyTail {
        c: default_heavy_tail_c(),
    };
    let tail = run_heavy_tail_scan(&ns, MRule::Fixed(9), 20, heavy, 7)?;
    let normal = run_heavy_tail_scan(&ns, MRule::Fixed(9), 20, ChainSpec::GaussianIid, 7)?;

    println!("median over 20 datasets of ln(bootstrap variance), m = 9");
    println!("{:>7} {:>14} {:>10}", "n", "heavy tail", "gaussian");
    for (h, g) in tail.iter().zip(&normal) {
        println!(
            "{:>7} {:>14.2} {:>10.4}",
            h.n, h.median_log_variance, g.median_log_variance
        );
    }
    Ok(())
}
