//! Bootstrapping the maximum of Uniform(0, θ) data: the full bootstrap puts
//! mass 1 - 1/e at zero, while m = o(n) shrinks that atom.
//!
//! cargo run --release --example uniform_max -- [n] [replicates]

use moonboot::harness::{run_max_demo, two_thirds_m};
use moonboot::moon::MRule;

fn main() -> moonboot::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(5000, |a| a.parse().expect("n"));
    let b: usize = args.next().map_or(2000, |a| a.parse().expect("replicates"));

    println!(
        "{:>6} {:>10} {:>12} {:>10}",
        "m", "P(T* = 0)", "KS to Exp", "mean T*"
    );
    for m in [n, two_thirds_m(n), (n as f64).sqrt() as usize, 10] {
        let r = run_max_demo(n, 1.0, MRule::Fixed(m), b, 3)?;
        println!(
            "{:>6} {:>10.4} {:>12.4} {:>10.4}",
            r.m, r.zero_fraction, r.ks_to_exponential, r.scale_fit
        );
    }
    println!("1 - 1/e = {:.4}", 1.0 - (-1.0f64).exp());
    Ok(())
}
