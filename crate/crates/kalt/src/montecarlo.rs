//! Seeded, parallel Monte Carlo estimation and normality diagnostics.
//!
//! Samples are keyed by sample index, not by worker: sample `s` of a run
//! with master seed `m` is always drawn from the stream
//! `SeedSpec { master_seed: m, stream_index: s }`. Work is split into
//! fixed-size chunks of consecutive indices; chunk accumulators are merged
//! in index order. Both choices together make every estimate bit-identical
//! for a given `(inputs, master_seed)` on any thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::kstats::{alt_len_slice, peak_count_slice, scan_slice};
use crate::localstats::{self, local_count_slice, mismatch_slice};
use crate::permutation::{sample_uniform_into, SeedSpec};
use crate::welford::MomentAccumulator;

pub use crate::rng::stream_seed;

/// Fixed chunk length for parallel accumulation. Part of the reproducibility
/// contract: results depend on this constant, never on the worker count.
const SAMPLE_CHUNK: u64 = 4096;

/// 97.5% standard normal quantile, for two-sided 95% intervals.
const Z95: f64 = 1.959963984540054;

/// Which permutation statistic to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    /// Number of k-peaks.
    Peaks,
    /// Longest k-alternating (down-first) subsequence length.
    AltLen,
    /// Longest k-zigzagging subsequence length.
    ZigzagLen,
    /// Number of local k-peaks for window radius `m`.
    LocalPeaks { m: usize },
    /// Indicator that the window radius `m` misses a true k-peak.
    Mismatch { m: usize },
}

impl Stat {
    /// Parse a selector name; `m` is required for the windowed statistics.
    pub fn parse(name: &str, m: Option<usize>) -> Result<Stat> {
        let needs_m = |m: Option<usize>, which: &str| {
            m.ok_or_else(|| {
                Error::DomainError(format!("selector {which:?} needs a window radius m"))
            })
        };
        match name {
            "peaks" => Ok(Stat::Peaks),
            "as" => Ok(Stat::AltLen),
            "zs" => Ok(Stat::ZigzagLen),
            "local_peaks" | "local-peaks" => Ok(Stat::LocalPeaks {
                m: needs_m(m, name)?,
            }),
            "mismatch" => Ok(Stat::Mismatch {
                m: needs_m(m, name)?,
            }),
            other => Err(Error::InvalidSelector(other.to_string())),
        }
    }

    /// Canonical selector name.
    pub fn name(&self) -> &'static str {
        match self {
            Stat::Peaks => "peaks",
            Stat::AltLen => "as",
            Stat::ZigzagLen => "zs",
            Stat::LocalPeaks { .. } => "local_peaks",
            Stat::Mismatch { .. } => "mismatch",
        }
    }

    fn window(&self) -> Option<usize> {
        match self {
            Stat::LocalPeaks { m } | Stat::Mismatch { m } => Some(*m),
            _ => None,
        }
    }

    fn eval(&self, values: &[u32], k: usize) -> f64 {
        match *self {
            Stat::Peaks => peak_count_slice(values, k) as f64,
            Stat::AltLen => alt_len_slice(values, k) as f64,
            Stat::ZigzagLen => scan_slice(values, k).zigzag_len() as f64,
            Stat::LocalPeaks { m } => local_count_slice(values, k, m) as f64,
            Stat::Mismatch { m } => f64::from(mismatch_slice(values, k, m)),
        }
    }
}

/// Streaming Monte Carlo estimate of a statistic's mean and variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub samples: u64,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub std_error_mean: f64,
    /// 95% confidence interval for the mean (normal theory).
    pub ci95_mean: (f64, f64),
    /// 95% confidence interval for the variance (large-sample, via the
    /// fourth central moment).
    pub ci95_variance: (f64, f64),
}

impl MomentEstimate {
    pub(crate) fn from_accumulator(acc: &MomentAccumulator) -> Self {
        let mean = acc.mean();
        let variance = acc.sample_variance();
        let sem = acc.std_error_mean();
        let sev = acc.std_error_variance();
        MomentEstimate {
            samples: acc.count(),
            mean,
            variance,
            std_error_mean: sem,
            ci95_mean: (mean - Z95 * sem, mean + Z95 * sem),
            ci95_variance: (variance - Z95 * sev, variance + Z95 * sev),
        }
    }
}

fn validate_stat(stat: Stat, n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DomainError("permutation size n must be >= 1".into()));
    }
    if k == 0 {
        return Err(Error::DomainError("gap parameter k must be >= 1".into()));
    }
    if stat.window() == Some(0) {
        return Err(Error::DomainError("window radius m must be >= 1".into()));
    }
    Ok(())
}

/// Run `eval` over all sample indices `0..samples` in fixed chunks, merging
/// chunk accumulators in index order.
fn accumulate_chunked<T, F>(samples: u64, eval: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> T + Sync,
{
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * SAMPLE_CHUNK;
            let hi = (lo + SAMPLE_CHUNK).min(samples);
            eval(lo..hi)
        })
        .collect()
}

/// Monte Carlo estimate of `stat` over `samples` independent uniform
/// permutations of size `n`.
pub fn estimate(
    stat: Stat,
    n: usize,
    k: usize,
    samples: u64,
    master_seed: u64,
) -> Result<MomentEstimate> {
    validate_stat(stat, n, k)?;
    if samples < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: samples,
        });
    }
    let chunk_accs = accumulate_chunked(samples, |range| {
        let mut acc = MomentAccumulator::new();
        let mut buf = Vec::with_capacity(n);
        for s in range {
            sample_uniform_into(n, SeedSpec::new(master_seed, s), &mut buf);
            acc.push(stat.eval(&buf, k));
        }
        acc
    });
    let total = chunk_accs
        .into_iter()
        .fold(MomentAccumulator::new(), MomentAccumulator::merge);
    Ok(MomentEstimate::from_accumulator(&total))
}

/// How to center and scale the sampled statistic before comparing with the
/// standard normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Standardize {
    /// Sample mean and sample standard deviation (default; makes no use of
    /// any unproven constant).
    Sample,
    /// Closed-form mean and variance. For the alternating length the
    /// variance constant is conjectural and the report says so.
    Formula,
}

impl Standardize {
    pub fn name(&self) -> &'static str {
        match self {
            Standardize::Sample => "sample",
            Standardize::Formula => "formula",
        }
    }
}

/// Centering and scaling actually used for a normality report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardizationInfo {
    /// `"sample"` or `"formula"`.
    pub method: String,
    pub center: f64,
    pub scale: f64,
    /// True when `scale` rests on the conjectured variance constant.
    pub variance_is_conjectural: bool,
}

/// Empirical Kolmogorov distance of a standardized statistic to the
/// standard normal, with truncation-bound diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub n: usize,
    pub k: usize,
    /// Window radius used for the reported truncation bound.
    pub m_window: usize,
    pub samples: u64,
    /// `sup_x |empirical CDF - Phi(x)|`, in [0, 1].
    pub d_k_empirical: f64,
    pub standardization: StandardizationInfo,
    /// `3 n (k/n)^m_window`.
    pub tv_bound_value: f64,
}

/// Standard normal CDF via the complementary error function
/// (`libm::erfc`, an fdlibm-derived rational approximation accurate to
/// well under 1e-10 absolute error over the whole real line).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * std::f64::consts::FRAC_1_SQRT_2)
}

/// Sample `stat`, standardize, and measure the Kolmogorov distance of the
/// empirical law to the standard normal. Only `Stat::AltLen` and
/// `Stat::Peaks` are accepted.
pub fn empirical_kolmogorov(
    stat: Stat,
    n: usize,
    k: usize,
    samples: u64,
    master_seed: u64,
    standardize: Standardize,
    m_window: usize,
) -> Result<CltReport> {
    match stat {
        Stat::AltLen | Stat::Peaks => {}
        other => return Err(Error::InvalidSelector(other.name().to_string())),
    }
    validate_stat(stat, n, k)?;
    if samples < 1000 {
        return Err(Error::TooFewSamples {
            min: 1000,
            got: samples,
        });
    }
    let tv_bound_value = localstats::tv_bound(n, k, m_window)?;

    let chunks = accumulate_chunked(samples, |range| {
        let mut acc = MomentAccumulator::new();
        let mut buf = Vec::with_capacity(n);
        let mut values = Vec::with_capacity((range.end - range.start) as usize);
        for s in range {
            sample_uniform_into(n, SeedSpec::new(master_seed, s), &mut buf);
            let v = stat.eval(&buf, k);
            acc.push(v);
            values.push(v);
        }
        (acc, values)
    });
    let mut acc = MomentAccumulator::new();
    let mut values = Vec::with_capacity(samples as usize);
    for (chunk_acc, chunk_values) in chunks {
        acc = acc.merge(chunk_acc);
        values.extend(chunk_values);
    }

    let (center, scale, conjectural) = match standardize {
        Standardize::Sample => (acc.mean(), acc.sample_variance().sqrt(), false),
        Standardize::Formula => match stat {
            Stat::AltLen => {
                let f = exact::as_moment_formulas(n, k)?;
                (f.e_as.to_f64(), f.var_as_conjecture.to_f64().sqrt(), true)
            }
            Stat::Peaks => {
                let mean = exact::e_peaks_formula(n, k)?;
                let var = exact::var_peaks_formula(n, k)?;
                (mean.to_f64(), var.to_f64().sqrt(), false)
            }
            _ => unreachable!("selector checked above"),
        },
    };
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::DegenerateScale);
    }

    for v in &mut values {
        *v = (*v - center) / scale;
    }
    values.sort_unstable_by(f64::total_cmp);
    let count = values.len() as f64;
    let mut d_k = 0.0f64;
    for (idx, &z) in values.iter().enumerate() {
        let phi = normal_cdf(z);
        d_k = d_k
            .max(phi - idx as f64 / count)
            .max((idx + 1) as f64 / count - phi);
    }

    Ok(CltReport {
        n,
        k,
        m_window,
        samples,
        d_k_empirical: d_k,
        standardization: StandardizationInfo {
            method: standardize.name().to_string(),
            center,
            scale,
            variance_is_conjectural: conjectural,
        },
        tv_bound_value,
    })
}
