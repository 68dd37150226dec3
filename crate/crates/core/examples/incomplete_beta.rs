//! The regularized incomplete beta function across parameter scales.
//!
//! cargo run --example incomplete_beta

use moonboot::numerics::{incomplete_beta_pair, BetaParams};

fn main() -> moonboot::Result<()> {
    let cases = [
        (2.0, 3.0, 0.4),
        (37.0, 64.0, 0.3),
        (500.0, 501.0, 0.49),
        (5.0, 99_996.0, 3e-5),
        (1e6, 1e6, 0.4995),
    ];
    println!(
        "{:>10} {:>10} {:>8} {:>24} {:>24}",
        "a", "b", "x", "I_x(a,b)", "1 - I_x(a,b)"
    );
    for (a, b, x) in cases {
        let (lower, upper) = incomplete_beta_pair(BetaParams::new(a, b, x)?)?;
        println!("{a:>10} {b:>10} {x:>8} {lower:>24.17e} {upper:>24.17e}");
    }
    Ok(())
}
