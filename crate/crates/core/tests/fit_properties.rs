use beamqubit_core::analysis::{count_oscillations, fit_exponential_envelope, fit_single_exponential};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

fn grid(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| t_end * k as f64 / n as f64).collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decay_rate_recovered_under_noise(rate in 50.0f64..400.0, amp in 0.2f64..2.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = grid(3.0 / rate, 3000);
        let y: Vec<f64> = t
            .iter()
            .map(|&t| amp * (-rate * t).exp() * (1.0 + rng.gen_range(-0.01..0.01)))
            .collect();
        let f = fit_single_exponential(&t, &y).unwrap();
        prop_assert!(rel(f.rate, rate) < 0.02, "{} vs {}", f.rate, rate);
        prop_assert!(rel(f.amplitude, amp) < 0.02);
        prop_assert!(f.r_squared > 0.99);
    }

    #[test]
    fn envelope_rates_recovered_under_noise(
        down in 1000.0f64..5000.0,
        up in 30.0f64..120.0,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let split = 5e-3;
        let t = grid(0.05, 200_000);
        let y: Vec<f64> = t
            .iter()
            .map(|&t| {
                let env = if t < split {
                    (-down * t).exp()
                } else {
                    (-down * split).exp() * (up * (t - split)).exp()
                };
                env * (TAU * 20_000.0 * t).cos() * (1.0 + rng.gen_range(-0.01..0.01))
            })
            .collect();
        let f = fit_exponential_envelope(&t, &y).unwrap();
        prop_assert!(rel(f.descending_rate().unwrap(), down) < 0.02, "down {:?} vs {}", f.descending_rate(), down);
        prop_assert!(rel(f.ascending_rate().unwrap(), up) < 0.02, "up {:?} vs {}", f.ascending_rate(), up);
    }

    #[test]
    fn crossings_of_a_sinusoid(cycles in 2usize..40, phase in 0.1f64..3.0) {
        // Phase kept off the sample grid so no sample lands exactly on zero.
        let t = grid(1.0, 40_000);
        let y: Vec<f64> = t.iter().map(|&t| (TAU * cycles as f64 * t + phase).sin()).collect();
        let c = count_oscillations(&t, &y, 1e-4).unwrap();
        prop_assert_eq!(c.zero_crossings, 2 * cycles);
        prop_assert_eq!(c.oscillation_count, cycles);
    }
}
