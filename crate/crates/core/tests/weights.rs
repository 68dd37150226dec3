use moonboot::moon::{moon_weights, SubsampleSize};
use moonboot::quantile::QuantileLevel;
use proptest::prelude::*;

// P(k-th smallest of m draws from {0..n-1} equals j), by listing all n^m tuples.
fn enumerate(n: usize, m: usize, k: usize) -> Vec<f64> {
    let total = n.pow(m as u32);
    let mut counts = vec![0u64; n];
    let mut draw = vec![0usize; m];
    for code in 0..total {
        let mut c = code;
        for d in draw.iter_mut() {
            *d = c % n;
            c /= n;
        }
        let mut s = draw.clone();
        s.sort_unstable();
        counts[s[k - 1]] += 1;
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

// k for level p without going through QuantileLevel.
fn k_of(m: usize, p_num: usize, p_den: usize) -> usize {
    m * p_num / p_den + 1
}

#[test]
fn enumeration_equivalence_small_grid() {
    for n in 1..=5 {
        for m in 1..=n {
            for (num, den) in [(1, 4), (1, 2), (3, 4), (1, 3), (2, 3), (1, 10)] {
                let level = QuantileLevel::new(num as f64 / den as f64).unwrap();
                let size = SubsampleSize::new(m, n).unwrap();
                assert_eq!(
                    size.k(level),
                    k_of(m, num, den),
                    "k for m={m} p={num}/{den}"
                );
                let w = moon_weights(n, size, level).unwrap();
                for (j, (a, b)) in w
                    .weights()
                    .iter()
                    .zip(enumerate(n, m, size.k(level)))
                    .enumerate()
                {
                    assert!(
                        (a - b).abs() <= 1e-10,
                        "n={n} m={m} p={num}/{den} j={j}: {a} vs {b}"
                    );
                }
            }
        }
    }
}

#[test]
fn six_of_six_by_enumeration() {
    let size = SubsampleSize::new(6, 6).unwrap();
    let w = moon_weights(6, size, QuantileLevel::MEDIAN).unwrap();
    let oracle = enumerate(6, 6, 4);
    for (a, b) in w.weights().iter().zip(&oracle) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn table_scale_weights_are_a_distribution() {
    for (n, m) in [(10_000, 9), (10_000, 100), (50_000, 223), (1_000_000, 100)] {
        let w = moon_weights(n, SubsampleSize::new(m, n).unwrap(), QuantileLevel::MEDIAN).unwrap();
        let total: f64 = w.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-10, "n={n} m={m}: {total}");
        assert!(w.weights().iter().all(|&x| x >= 0.0));
    }
}

proptest! {
    #[test]
    fn odd_m_median_weights_are_symmetric(n in 1usize..400, half in 0usize..40) {
        let m = 2 * half + 1;
        prop_assume!(m <= n);
        let w = moon_weights(n, SubsampleSize::new(m, n).unwrap(), QuantileLevel::MEDIAN).unwrap();
        let w = w.weights();
        for j in 0..n {
            prop_assert!((w[j] - w[n - 1 - j]).abs() <= 1e-12, "j={}: {} vs {}", j, w[j], w[n - 1 - j]);
        }
    }

    #[test]
    fn weights_sum_to_one(n in 1usize..3000, m_frac in 0.0f64..1.0, p in 0.01f64..0.99) {
        let m = ((n as f64 * m_frac) as usize).clamp(1, n);
        let w = moon_weights(n, SubsampleSize::new(m, n).unwrap(), QuantileLevel::new(p).unwrap()).unwrap();
        let total: f64 = w.weights().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        prop_assert!(w.weights().iter().all(|&x| x >= 0.0));
    }
}
