//! Bootstrap weights and the closed-form variance for a small sample.
//!
//! cargo run --example weights

use moonboot::moon::{closed_form_variance, moon_weights, SubsampleSize};
use moonboot::quantile::{sample_quantile, QuantileLevel, SortedSample};

fn main() -> moonboot::Result<()> {
    let sample = SortedSample::from_values(vec![3.1, -0.4, 2.2, 0.9, 1.7, -1.3, 0.2, 4.0, 1.1])?;
    let level = QuantileLevel::MEDIAN;
    let size = SubsampleSize::new(5, sample.len())?;
    let weights = moon_weights(sample.len(), size, level)?;

    println!(
        "n = {}, m = {}, k = {}",
        weights.n(),
        weights.m(),
        weights.k()
    );
    println!("{:>3}  {:>8}  {:>10}", "j", "X_(j)", "W_{m,j}");
    for (j, w) in weights.weights().iter().enumerate() {
        println!(
            "{:>3}  {:>8.3}  {:>10.6}",
            j + 1,
            sample.order_stat(j + 1),
            w
        );
    }

    let variance = closed_form_variance(&sample, &weights, level)?;
    println!("sample median       = {}", sample_quantile(&sample, level));
    println!("bootstrap variance  = {:.6}", variance.sigma2);
    println!("bootstrap sd        = {:.6}", variance.sd());
    Ok(())
}
