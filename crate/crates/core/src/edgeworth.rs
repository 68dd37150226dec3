//! One-term Edgeworth corrections to the normal approximation.

use crate::error::{invalid, Result};
use crate::moon::StudentizedDraws;
use crate::numerics::{hermite2, std_normal_cdf, std_normal_pdf};
use crate::quantile::{ks_distance, QuantileLevel};

/// Population density `f(μ)` and its derivative `f'(μ)` at the target quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityHandle {
    f_mu: f64,
    fprime_mu: f64,
    level: QuantileLevel,
}

impl DensityHandle {
    pub fn new(f_mu: f64, fprime_mu: f64, level: QuantileLevel) -> Result<Self> {
        if !(f_mu > 0.0 && f_mu.is_finite()) {
            return Err(invalid(
                "f_mu",
                format!("density must be positive, got {f_mu}"),
            ));
        }
        if !fprime_mu.is_finite() {
            return Err(invalid("fprime_mu", "must be finite"));
        }
        Ok(Self {
            f_mu,
            fprime_mu,
            level,
        })
    }

    pub fn f_mu(&self) -> f64 {
        self.f_mu
    }

    pub fn fprime_mu(&self) -> f64 {
        self.fprime_mu
    }

    pub fn level(&self) -> QuantileLevel {
        self.level
    }

    /// `σ = √(p(1-p)) / f(μ)`.
    pub fn sigma(&self) -> f64 {
        let p = self.level.value();
        (p * (1.0 - p)).sqrt() / self.f_mu
    }
}

/// `P(X <= x)` for `X ~ Binomial(m, p)` on the standardized scale
/// `t = (x - mp) / √(mp(1-p))`:
/// `Φ(t) - (1 - 2p) / (6 √(mp(1-p))) · φ(t) · H₂(t)`, clamped to `[0, 1]`.
pub fn binomial_edgeworth_cdf(m: u64, p: f64, t: f64) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "need at least one trial"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("must lie in (0, 1), got {p}")));
    }
    let spread = (m as f64 * p * (1.0 - p)).sqrt();
    let skew = (1.0 - 2.0 * p) / (6.0 * spread);
    let value = std_normal_cdf(t) - skew * std_normal_pdf(t) * hermite2(t);
    Ok(value.clamp(0.0, 1.0))
}

/// Two-term approximation of `P(T_m <= t)` for the Studentized bootstrap
/// quantile: `Φ(t) + (tσ)²/√m · f'(μ) · φ(tσ f(μ) / √(p(1-p)))`.
///
/// The correction is even in `t` and vanishes at `t = 0` and whenever the
/// density is flat at the quantile.
pub fn quantile_edgeworth_cdf(t: f64, m: usize, density: &DensityHandle) -> Result<f64> {
    if m == 0 {
        return Err(invalid("m", "resample size must be at least 1"));
    }
    let p = density.level.value();
    let sigma = density.sigma();
    let arg = t * sigma * density.f_mu / (p * (1.0 - p)).sqrt();
    let ts = t * sigma;
    let value =
        std_normal_cdf(t) + ts * ts / (m as f64).sqrt() * density.fprime_mu * std_normal_pdf(arg);
    Ok(value.clamp(0.0, 1.0))
}

/// `sup_t |P(T <= t) - Φ(t)|` over the empirical law of the draws.
pub fn berry_esseen_gap(draws: &StudentizedDraws) -> Result<f64> {
    ks_distance(&draws.t_values, std_normal_cdf)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Exact Binomial(m, p) CDF at 0..=m by direct summation of the pmf.
    fn exact_binomial_cdf(m: u64, p: f64) -> Vec<f64> {
        let mut pmf = vec![0.0f64; m as usize + 1];
        pmf[0] = (1.0 - p).powi(m as i32);
        for j in 1..=m as usize {
            pmf[j] = pmf[j - 1] * (m as usize + 1 - j) as f64 / j as f64 * p / (1.0 - p);
        }
        pmf.iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    fn midpoint_errors(m: u64, p: f64) -> (f64, f64) {
        let exact = exact_binomial_cdf(m, p);
        let spread = (m as f64 * p * (1.0 - p)).sqrt();
        let mut ew = 0.0f64;
        let mut normal = 0.0f64;
        for j in 0..m {
            let t = (j as f64 + 0.5 - m as f64 * p) / spread;
            let e = binomial_edgeworth_cdf(m, p, t).unwrap();
            ew = ew.max((e - exact[j as usize]).abs());
            normal = normal.max((std_normal_cdf(t) - exact[j as usize]).abs());
        }
        (ew, normal)
    }

    #[test]
    fn symmetric_binomial_is_plain_normal() {
        for &t in &[-2.0, -0.3, 0.0, 1.1, 3.0] {
            for m in [1, 7, 40] {
                assert_eq!(
                    binomial_edgeworth_cdf(m, 0.5, t).unwrap(),
                    std_normal_cdf(t)
                );
            }
        }
    }

    #[test]
    fn skewed_binomial_at_centre() {
        let v = binomial_edgeworth_cdf(50, 0.3, 0.0).unwrap();
        let want = 0.5 + 0.4 * std_normal_pdf(0.0) / (6.0 * 10.5f64.sqrt());
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.508208).abs() < 5e-7);
        // Lattice midpoint nearest the centre: P(X <= 14) for Binomial(50, 0.3).
        let exact = exact_binomial_cdf(50, 0.3)[14];
        let t = (14.5 - 15.0) / 10.5f64.sqrt();
        assert!((binomial_edgeworth_cdf(50, 0.3, t).unwrap() - exact).abs() < 0.01);
    }

    #[test]
    fn tails_and_validation() {
        assert_eq!(binomial_edgeworth_cdf(30, 0.2, 40.0).unwrap(), 1.0);
        assert_eq!(binomial_edgeworth_cdf(30, 0.2, -40.0).unwrap(), 0.0);
        assert!(binomial_edgeworth_cdf(0, 0.2, 0.0).is_err());
        assert!(binomial_edgeworth_cdf(5, 1.0, 0.0).is_err());
    }

    #[test]
    fn midpoint_accuracy_within_one_and_a_half_over_m() {
        for m in [20u64, 50, 100] {
            for p in [0.1, 0.3, 0.5] {
                let (ew, _) = midpoint_errors(m, p);
                assert!(ew <= 1.5 / m as f64, "m={m} p={p}: {ew}");
            }
        }
        let (ew, normal) = midpoint_errors(50, 0.3);
        assert!(ew <= normal);
    }

    #[test]
    fn quantile_expansion_values() {
        let half = QuantileLevel::MEDIAN;
        let exp_median = DensityHandle::new(0.5, -0.5, half).unwrap();
        assert!((exp_median.sigma() - 1.0).abs() < 1e-15);
        assert_eq!(quantile_edgeworth_cdf(0.0, 100, &exp_median).unwrap(), 0.5);
        let v = quantile_edgeworth_cdf(1.0, 100, &exp_median).unwrap();
        let want = std_normal_cdf(1.0) - 0.5 * std_normal_pdf(1.0) / 10.0;
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.829246).abs() < 5e-7);

        let normal_median = DensityHandle::new(std_normal_pdf(0.0), 0.0, half).unwrap();
        for &t in &[-2.0, 0.7, 1.5] {
            assert_eq!(
                quantile_edgeworth_cdf(t, 30, &normal_median).unwrap(),
                std_normal_cdf(t)
            );
        }
        assert!(DensityHandle::new(0.0, 1.0, half).is_err());
    }

    #[test]
    fn sigma_matches_density() {
        let q = QuantileLevel::new(0.3).unwrap();
        let d = DensityHandle::new(0.7, 0.2, q).unwrap();
        assert!((d.sigma() - (0.21f64).sqrt() / 0.7).abs() < 1e-12);
    }

    #[test]
    fn expansion_converges_to_normal() {
        let d = DensityHandle::new(0.5, -0.5, QuantileLevel::MEDIAN).unwrap();
        let gaps: Vec<f64> = [10usize, 100, 10_000, 1_000_000]
            .iter()
            .map(|&m| (quantile_edgeworth_cdf(1.3, m, &d).unwrap() - std_normal_cdf(1.3)).abs())
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[3] < 1e-3);
    }

    #[test]
    fn gap_of_a_single_atom() {
        let draws = StudentizedDraws {
            t_values: vec![0.0],
            m: 1,
        };
        assert_eq!(berry_esseen_gap(&draws).unwrap(), 0.5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn correction_is_even_with_sign_of_slope(
                t in 0.0f64..4.0, m in 1usize..5000, f in 0.05f64..2.0, fp in -3.0f64..3.0, p in 0.05f64..0.95,
            ) {
                let d = DensityHandle::new(f, fp, QuantileLevel::new(p).unwrap()).unwrap();
                let up = quantile_edgeworth_cdf(t, m, &d).unwrap() - std_normal_cdf(t);
                let down = quantile_edgeworth_cdf(-t, m, &d).unwrap() - std_normal_cdf(-t);
                // Clamping to [0, 1] only bites far out in the tails.
                let clamped = |v: f64| v <= 0.0 || v >= 1.0;
                let a = quantile_edgeworth_cdf(t, m, &d).unwrap();
                let b = quantile_edgeworth_cdf(-t, m, &d).unwrap();
                if !clamped(a) && !clamped(b) {
                    prop_assert!((up - down).abs() < 1e-12);
                    if up.abs() > 1e-14 {
                        prop_assert_eq!(up.signum(), fp.signum());
                    }
                }
            }
        }
    }
}
