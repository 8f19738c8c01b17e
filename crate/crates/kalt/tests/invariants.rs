//! Property tests for the structural invariants of the statistics.

use proptest::prelude::*;

use kalt::kstats::{
    alt_lengths, longest_alternating_fast, peak_count_fast, peak_profile_ref, zigzag_length,
};
use kalt::localstats::{is_local_k_peak, local_profile, mismatch_indicator, tv_bound};
use kalt::welford::MomentAccumulator;
use kalt::xalt::{las_x, sample_unit_vector};
use kalt::{Permutation, SeedSpec};

fn perm_strategy(max_n: usize) -> impl Strategy<Value = Permutation> {
    (1..=max_n, any::<u64>())
        .prop_map(|(n, seed)| Permutation::sample_uniform(n, SeedSpec::new(seed, 0)))
}

proptest! {
    #[test]
    fn flip_and_inverse_are_involutions(p in perm_strategy(300)) {
        prop_assert_eq!(p.flip().flip(), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn parse_display_round_trip(p in perm_strategy(100)) {
        prop_assert_eq!(Permutation::parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn residual_and_zigzag_bounds(p in perm_strategy(200), k in 1usize..=220) {
        let a = alt_lengths(&p, k);
        prop_assert!(a.residual.abs() <= 1);
        prop_assert!(1 <= a.as_len && a.as_len <= a.zs_len && a.zs_len <= a.as_len + 1);
        prop_assert_eq!(a.as_len as i64, 2 * peak_count_fast(&p, k) as i64 + a.residual);
        if k >= p.n() {
            prop_assert_eq!(peak_count_fast(&p, k), 0);
            prop_assert_eq!(a.as_len, 1);
        }
    }

    #[test]
    fn statistics_are_nonincreasing_in_k(p in perm_strategy(150), k in 1usize..150) {
        prop_assert!(longest_alternating_fast(&p, k) >= longest_alternating_fast(&p, k + 1));
        prop_assert!(peak_count_fast(&p, k) >= peak_count_fast(&p, k + 1));
        prop_assert!(zigzag_length(&p, k) >= zigzag_length(&p, k + 1));
    }

    #[test]
    fn peak_profile_invariants(p in perm_strategy(120), k in 1usize..=10) {
        let profile = peak_profile_ref(&p, k);
        prop_assert_eq!(profile.count, profile.indicators.iter().filter(|&&b| b).count());
        prop_assert!(profile.count <= p.n());
        for i in 1..=k.min(p.n()) {
            prop_assert!(!profile.is_peak(i), "value {} <= k cannot be a peak", i);
        }
    }

    #[test]
    fn local_peaks_are_peaks(p in perm_strategy(60), k in 1usize..=6, m in 1usize..=8) {
        let profile = peak_profile_ref(&p, k);
        let local = local_profile(&p, k, m);
        for i in 1..=p.n() {
            let y = local.y_indicators[i - 1];
            prop_assert!(!y || profile.indicators[i - 1], "Y_{i} > P_{i}");
            prop_assert_eq!(y, is_local_k_peak(&p, i, k, m).unwrap());
        }
        prop_assert!(local.y_count <= profile.count);
        prop_assert_eq!(mismatch_indicator(&p, k, m), local.y_count < profile.count);
    }

    #[test]
    fn local_count_is_nondecreasing_in_window(p in perm_strategy(60), k in 1usize..=6) {
        let mut prev = 0usize;
        for m in 1..=p.n() + 1 {
            let count = local_profile(&p, k, m).y_count;
            prop_assert!(count >= prev, "y_count dropped from {} to {} at m={}", prev, count, m);
            prev = count;
        }
        // a window covering the whole permutation reproduces the truth
        prop_assert_eq!(prev, peak_count_fast(&p, k));
    }

    #[test]
    fn tv_bound_is_monotone_in_window(n in 3usize..200, k_frac in 0.01f64..0.99, m in 1usize..20) {
        let k = ((n as f64 * k_frac) as usize).clamp(1, n - 1);
        let b1 = tv_bound(n, k, m).unwrap();
        let b2 = tv_bound(n, k, m + 1).unwrap();
        prop_assert!(b2 <= b1);
        prop_assert!(b1 >= 0.0);
    }

    #[test]
    fn continuous_gap_length_is_nonincreasing_in_threshold(seed in any::<u64>(), n in 2usize..80) {
        let v = sample_unit_vector(n, SeedSpec::new(seed, 1));
        let mut prev = usize::MAX;
        for step in 1..=12 {
            let len = las_x(&v, step as f64 / 12.0).unwrap();
            prop_assert!(len <= prev);
            prev = len;
        }
    }

    #[test]
    fn rescaled_permutation_with_tiny_threshold_recovers_k1_length(p in perm_strategy(80)) {
        let n = p.n();
        let scaled: Vec<f64> = p.values().iter().map(|&v| v as f64 / (n as f64 + 1.0)).collect();
        let v = kalt::xalt::UnitVector::new(scaled).unwrap();
        // any threshold below the minimal spacing 1/(n+1) sees pure k=1 alternation
        let x = 0.5 / (n as f64 + 1.0);
        prop_assert_eq!(las_x(&v, x).unwrap(), longest_alternating_fast(&p, 1));
    }

    #[test]
    fn welford_merge_agrees_with_single_pass(
        data in prop::collection::vec(-1e3f64..1e3, 2..400),
        split in 0usize..400,
    ) {
        let split = split.min(data.len());
        let mut whole = MomentAccumulator::new();
        let mut a = MomentAccumulator::new();
        let mut b = MomentAccumulator::new();
        for (i, &x) in data.iter().enumerate() {
            whole.push(x);
            if i < split { a.push(x) } else { b.push(x) }
        }
        let merged = a.merge(b);
        prop_assert_eq!(merged.count(), whole.count());
        let scale = whole.sample_variance().abs().max(1.0);
        prop_assert!((merged.mean() - whole.mean()).abs() <= 1e-9 * whole.mean().abs().max(1.0));
        prop_assert!((merged.sample_variance() - whole.sample_variance()).abs() <= 1e-9 * scale);
    }

    #[test]
    fn seeded_sampling_is_a_pure_function(seed in any::<u64>(), idx in any::<u64>(), n in 1usize..500) {
        let a = Permutation::sample_uniform(n, SeedSpec::new(seed, idx));
        let b = Permutation::sample_uniform(n, SeedSpec::new(seed, idx));
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn parser_never_panics(text in ".{0,80}") {
        // any outcome is fine; it just must be a Result, not a panic
        let _ = Permutation::parse(&text);
    }

    #[test]
    fn parser_accepts_any_separator_mix(p in perm_strategy(40), comma in prop::collection::vec(any::<bool>(), 0..40)) {
        let mut text = String::new();
        for (i, v) in p.values().iter().enumerate() {
            if i > 0 {
                text.push(if *comma.get(i % comma.len().max(1)).unwrap_or(&true) { ',' } else { ' ' });
            }
            text.push_str(&v.to_string());
        }
        prop_assert_eq!(Permutation::parse(&text).unwrap(), p);
    }
}
