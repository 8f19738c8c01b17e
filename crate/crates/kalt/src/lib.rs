//! Statistics of k-peaks and longest k-alternating subsequences in random
//! permutations.
//!
//! For a permutation of `[1, n]` and a gap parameter `k >= 1`, this crate
//! computes the number of k-peaks and k-valleys and the lengths of the
//! longest k-alternating and k-zigzagging subsequences, and provides three
//! layers of machinery around them:
//!
//! * [`kstats`] / [`localstats`] — the statistics themselves, each with a
//!   literal quadratic reference algorithm and a certified O(n) fast path,
//!   plus windowed "local" variants and the truncation bound that controls
//!   how much the window can miss.
//! * [`exact`] — an exhaustive-enumeration oracle over S_n (n <= 12) in
//!   exact rational arithmetic, next to closed-form evaluators for the
//!   known moment formulas of these statistics.
//! * [`montecarlo`] / [`xalt`] — seeded, parallel Monte Carlo estimation,
//!   an empirical Kolmogorov-distance normality check, and the continuous
//!   gap-alternating statistic with its binomial coupling.
//!
//! Values are 1-based throughout, matching the usual one-line notation.
//!
//! # Reproducibility
//!
//! All sampling is keyed by `(master_seed, stream_index)` pairs through the
//! documented chain in [`rng`]; parallel estimators chunk the sample index
//! space and merge in index order. A run is therefore bit-identical for a
//! fixed seed on any worker count.
//!
//! ```
//! use kalt::{alt_lengths, Permutation};
//!
//! let p = Permutation::parse("2,1,3").unwrap();
//! let a = alt_lengths(&p, 1);
//! assert_eq!((a.as_len, a.zs_len, a.residual), (3, 3, -1));
//! ```
//!
//! The `cross-check` feature makes every fast-path call verify itself
//! against its quadratic reference (for debugging; the test suite already
//! certifies the equivalences exhaustively for n <= 8).

pub mod error;
pub mod exact;
pub mod kstats;
pub mod localstats;
pub mod montecarlo;
pub mod permutation;
pub mod rational;
pub mod rng;
mod scan;
pub mod welford;
pub mod xalt;

pub use error::{Error, Result};
pub use kstats::{
    alt_lengths, longest_alternating_dp, longest_alternating_fast, peak_count_fast,
    peak_profile_ref, valley_count, zigzag_length, AltLengths, PeakProfile,
};
pub use permutation::{Permutation, SeedSpec};
pub use rational::Rational;

// Compile the README's code example as a doctest.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
