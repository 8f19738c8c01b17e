//! The continuous gap-alternating statistic on unit-interval vectors and
//! its binomial coupling.
//!
//! For a vector of distinct reals in `[0, 1]` and a threshold `x`, the
//! statistic is the longest down-first alternating subsequence whose
//! consecutive gaps are all at least `x` — the continuous analogue of the
//! integer k-alternating length. For a uniformly random vector this is
//! distributed exactly like the 1-alternating length of a uniformly random
//! permutation of size `Z`, with `Z` binomial over `n` trials with success
//! probability `1 - x`; [`coupling_check`] samples both sides and compares
//! their empirical laws and moments.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kstats::alt_len_slice;
use crate::montecarlo::MomentEstimate;
use crate::permutation::SeedSpec;
use crate::scan;
use crate::welford::MomentAccumulator;

/// A vector of pairwise distinct reals in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    values: Vec<f64>,
}

impl UnitVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySequence);
        }
        if values
            .iter()
            .any(|v| !v.is_finite() || !(0.0..=1.0).contains(v))
        {
            return Err(Error::DomainError("entries must lie in [0, 1]".into()));
        }
        if has_duplicates(&values) {
            return Err(Error::DomainError(
                "entries must be pairwise distinct".into(),
            ));
        }
        Ok(UnitVector { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn has_duplicates(values: &[f64]) -> bool {
    let mut bits: Vec<u64> = values.iter().map(|v| v.to_bits()).collect();
    bits.sort_unstable();
    bits.windows(2).any(|w| w[0] == w[1])
}

/// `n` independent uniform draws from the stream determined by `seed`.
/// Exact duplicates (probability ~2^-53 per pair) are rejected and the
/// whole vector redrawn from the continuing stream.
pub fn sample_unit_vector(n: usize, seed: SeedSpec) -> UnitVector {
    assert!(n >= 1, "vector length must be >= 1");
    let mut rng = seed.rng();
    let mut values = vec![0.0f64; n];
    loop {
        for v in &mut values {
            *v = rng.next_f64();
        }
        if !has_duplicates(&values) {
            return UnitVector { values };
        }
    }
}

/// Longest down-first alternating subsequence of `v` with every gap at
/// least `x`, via the certified section scan (always at least 1).
pub fn las_x(v: &UnitVector, x: f64) -> Result<usize> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::DomainError(format!(
            "gap threshold must be positive, got {x}"
        )));
    }
    let len = scan::scan(v.values(), x).alternating_len();
    #[cfg(feature = "cross-check")]
    assert_eq!(
        len,
        crate::kstats::longest_alternating_dp(v.values(), x).expect("nonempty"),
        "fast continuous alternating length diverged from DP"
    );
    Ok(len)
}

/// One empirical distribution bin: observed subsequence length and count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub len: usize,
    pub count: u64,
}

/// Two-sample comparison of the continuous statistic against its binomial
/// coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub n: usize,
    pub x: f64,
    /// Samples per side.
    pub samples: u64,
    /// Closed-form mean `(2/3) n (1-x) + 1/6`.
    pub formula_mean: f64,
    /// Closed-form variance `(1-x)(2+5x) 4n/45`.
    pub formula_variance: f64,
    /// Moments of the continuous statistic.
    pub xalt: MomentEstimate,
    /// Moments of the coupled statistic (1-alternating length of a uniform
    /// permutation of binomial size; size 0 contributes 0, size 1
    /// contributes 1).
    pub binomial: MomentEstimate,
    /// Total variation distance between the two empirical laws.
    pub tv_distance: f64,
    pub histogram_xalt: Vec<HistogramBin>,
    pub histogram_binomial: Vec<HistogramBin>,
}

const SAMPLE_CHUNK: u64 = 4096;

struct CouplingShard {
    acc_xalt: MomentAccumulator,
    acc_binom: MomentAccumulator,
    hist_xalt: Vec<u64>,
    hist_binom: Vec<u64>,
}

impl CouplingShard {
    fn new(n: usize) -> Self {
        CouplingShard {
            acc_xalt: MomentAccumulator::new(),
            acc_binom: MomentAccumulator::new(),
            hist_xalt: vec![0; n + 1],
            hist_binom: vec![0; n + 1],
        }
    }

    fn merge(mut self, other: CouplingShard) -> CouplingShard {
        self.acc_xalt = self.acc_xalt.merge(other.acc_xalt);
        self.acc_binom = self.acc_binom.merge(other.acc_binom);
        for (a, b) in self.hist_xalt.iter_mut().zip(other.hist_xalt) {
            *a += b;
        }
        for (a, b) in self.hist_binom.iter_mut().zip(other.hist_binom) {
            *a += b;
        }
        self
    }
}

/// Draw `samples` of the continuous statistic and `samples` of its binomial
/// coupling, and compare laws and moments.
///
/// The continuous side uses stream indices `0..samples` under
/// `master_seed`, the binomial side `samples..2*samples`.
pub fn coupling_check(n: usize, x: f64, samples: u64, master_seed: u64) -> Result<CouplingReport> {
    if n == 0 {
        return Err(Error::DomainError("vector length n must be >= 1".into()));
    }
    if !x.is_finite() || x <= 0.0 || x >= 1.0 {
        return Err(Error::DomainError(format!(
            "threshold x must lie in (0, 1), got {x}"
        )));
    }
    if samples < 10_000 {
        return Err(Error::TooFewSamples {
            min: 10_000,
            got: samples,
        });
    }

    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let shards: Vec<CouplingShard> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * SAMPLE_CHUNK;
            let hi = (lo + SAMPLE_CHUNK).min(samples);
            let mut shard = CouplingShard::new(n);
            let mut perm_buf: Vec<u32> = Vec::with_capacity(n);
            for s in lo..hi {
                // continuous side
                let v = sample_unit_vector(n, SeedSpec::new(master_seed, s));
                let len = scan::scan(v.values(), x).alternating_len();
                shard.acc_xalt.push(len as f64);
                shard.hist_xalt[len] += 1;

                // coupled side: binomial size, then a uniform shuffle
                let mut rng = SeedSpec::new(master_seed, samples + s).rng();
                let mut z = 0usize;
                for _ in 0..n {
                    if rng.next_f64() < 1.0 - x {
                        z += 1;
                    }
                }
                let len = match z {
                    0 => 0,
                    1 => 1,
                    _ => {
                        perm_buf.clear();
                        perm_buf.extend(1..=z as u32);
                        for i in (1..z).rev() {
                            let j = rng.bounded(i as u64 + 1) as usize;
                            perm_buf.swap(i, j);
                        }
                        alt_len_slice(&perm_buf, 1)
                    }
                };
                shard.acc_binom.push(len as f64);
                shard.hist_binom[len] += 1;
            }
            shard
        })
        .collect();

    let merged = shards
        .into_iter()
        .fold(CouplingShard::new(n), CouplingShard::merge);

    let total = samples as f64;
    let tv_distance = merged
        .hist_xalt
        .iter()
        .zip(&merged.hist_binom)
        .map(|(&a, &b)| (a as f64 / total - b as f64 / total).abs())
        .sum::<f64>()
        / 2.0;

    let to_bins = |hist: &[u64]| {
        hist.iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(len, &count)| HistogramBin { len, count })
            .collect::<Vec<_>>()
    };

    Ok(CouplingReport {
        n,
        x,
        samples,
        formula_mean: (2.0 / 3.0) * n as f64 * (1.0 - x) + 1.0 / 6.0,
        formula_variance: (1.0 - x) * (2.0 + 5.0 * x) * 4.0 * n as f64 / 45.0,
        xalt: MomentEstimate::from_accumulator(&merged.acc_xalt),
        binomial: MomentEstimate::from_accumulator(&merged.acc_binom),
        tv_distance,
        histogram_xalt: to_bins(&merged.hist_xalt),
        histogram_binomial: to_bins(&merged.hist_binom),
    })
}
