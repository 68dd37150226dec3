//! Edgeworth corrections: the binomial CDF and the Studentized quantile.
//!
//! cargo run --example edgeworth

use moonboot::edgeworth::{binomial_edgeworth_cdf, quantile_edgeworth_cdf, DensityHandle};
use moonboot::numerics::std_normal_cdf;
use moonboot::quantile::QuantileLevel;

fn binomial_cdf(m: u64, p: f64) -> Vec<f64> {
    let mut pmf = (1.0 - p).powi(m as i32);
    let mut acc = 0.0;
    (0..=m)
        .map(|j| {
            if j > 0 {
                pmf *= (m - j + 1) as f64 / j as f64 * p / (1.0 - p);
            }
            acc += pmf;
            acc
        })
        .collect()
}

fn main() -> moonboot::Result<()> {
    let (m, p) = (50u64, 0.3);
    let exact = binomial_cdf(m, p);
    let sd = (m as f64 * p * (1.0 - p)).sqrt();
    println!("Binomial({m}, {p}) at lattice midpoints");
    println!(
        "{:>3} {:>9} {:>9} {:>9}",
        "x", "exact", "normal", "edgeworth"
    );
    for x in (8..=22).step_by(2) {
        let t = (x as f64 + 0.5 - m as f64 * p) / sd;
        println!(
            "{x:>3} {:>9.5} {:>9.5} {:>9.5}",
            exact[x],
            std_normal_cdf(t),
            binomial_edgeworth_cdf(m, p, t)?
        );
    }

    // Exponential(1) median: f(μ) = 1/2, f'(μ) = -1/2.
    let density = DensityHandle::new(0.5, -0.5, QuantileLevel::MEDIAN)?;
    println!("\nStudentized bootstrap median, Exp(1) population");
    println!("{:>5} {:>9} {:>9} {:>9}", "t", "normal", "m=25", "m=400");
    for t in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        println!(
            "{t:>5.1} {:>9.5} {:>9.5} {:>9.5}",
            std_normal_cdf(t),
            quantile_edgeworth_cdf(t, 25, &density)?,
            quantile_edgeworth_cdf(t, 400, &density)?
        );
    }
    Ok(())
}
