//! Exhaustive-enumeration oracle over S_n and closed-form moment formulas.
//!
//! [`enumerate_moments`] walks every permutation of `[1, n]` (lexicographic
//! successor generation, no allocation per step), accumulating exact integer
//! sums of the peak count, alternating length and zigzag length together
//! with pairwise peak co-occurrence counts, and returns moments as exact
//! rationals over n!. Enumeration is capped at n = 12; work is partitioned
//! by first element and merged in a fixed order, so results are identical
//! on any worker count.
//!
//! The closed-form evaluators compute the published moment formulas for
//! these statistics. Their actual validity, mapped exhaustively against the
//! enumeration oracle (all `n <= 9`, all `1 <= k <= n-1`), is uneven and
//! each evaluator documents its own region:
//!
//! * mean peaks `(n-k+2)/3`, mean lengths `(4(n-k)+5)/6` and
//!   `(2(n-k)+4)/3`, and the per-value peak probability
//!   `(i-k)(i-k+1)/((n-k)(n-k+1))` are exact for every `1 <= k <= n-1`;
//! * peak variance `(2(n-k)+4)/45` is exact only for `k = 1` with
//!   `n >= 4`; for every `k >= 2` enumeration refutes it (see
//!   [`var_peaks_formula`]);
//! * the pairwise peak probability is exact only for `k = 1`, for `i <= k`
//!   (where it vanishes) and for `j = n`; every pair with
//!   `k+1 <= i < j <= n-1` deviates when `k >= 2` (see
//!   [`joint_peak_prob_formula`]);
//! * the alternating-length variance `8(n-k)/45 + 19/180` is a conjectured
//!   value, labeled as such everywhere it is reported (exact for `k = 1`,
//!   `n >= 4`, where it reduces to the proven `8n/45 - 13/180`).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::scan::scan_collect_peaks;

/// Hard cap on exhaustive enumeration (12! is ~4.8e8 permutations).
pub const MAX_ENUM_N: usize = 12;

/// Cap for the single-pair oracle [`joint_peak_prob_oracle`].
pub const MAX_JOINT_ORACLE_N: usize = 10;

/// Exact pairwise peak probability from enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JointPeakProb {
    pub i: usize,
    pub j: usize,
    pub prob: Rational,
}

/// Exact moments of the peak count and subsequence lengths over all of S_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactMoments {
    pub n: usize,
    pub k: usize,
    pub e_peaks: Rational,
    pub var_peaks: Rational,
    pub e_as: Rational,
    pub var_as: Rational,
    pub e_zs: Rational,
    pub var_zs: Rational,
    /// `prob[(i, j)]` that values i and j are simultaneously k-peaks, for
    /// all pairs i < j.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_peak_probs: Option<Vec<JointPeakProb>>,
}

/// In-place lexicographic successor; false once the slice is the last
/// (descending) arrangement. Starting from the ascending arrangement this
/// visits every arrangement exactly once.
pub fn next_permutation(values: &mut [u32]) -> bool {
    let n = values.len();
    if n < 2 {
        return false;
    }
    let mut pivot = n - 1;
    while pivot > 0 && values[pivot - 1] >= values[pivot] {
        pivot -= 1;
    }
    if pivot == 0 {
        return false;
    }
    let mut swap_with = n - 1;
    while values[swap_with] <= values[pivot - 1] {
        swap_with -= 1;
    }
    values.swap(pivot - 1, swap_with);
    values[pivot..].reverse();
    true
}

/// Integer accumulators for one enumeration shard. All sums are 128-bit
/// and checked; joint pair counts are bounded by n! and kept in u64.
struct Accum {
    n: usize,
    count: u128,
    sum_p: u128,
    sum_p2: u128,
    sum_as: u128,
    sum_as2: u128,
    sum_zs: u128,
    sum_zs2: u128,
    joint: Vec<u64>,
}

impl Accum {
    fn new(n: usize) -> Self {
        Accum {
            n,
            count: 0,
            sum_p: 0,
            sum_p2: 0,
            sum_as: 0,
            sum_as2: 0,
            sum_zs: 0,
            sum_zs2: 0,
            joint: vec![0u64; n * n],
        }
    }

    fn record(&mut self, values: &[u32], k: usize, peaks_buf: &mut Vec<u32>) -> Result<()> {
        peaks_buf.clear();
        let gap = k.min(values.len()) as u32;
        let summary = scan_collect_peaks(values, gap, peaks_buf);
        let p = summary.peaks as u128;
        let a = summary.alternating_len() as u128;
        let z = summary.zigzag_len() as u128;

        let add = |acc: u128, v: u128| acc.checked_add(v).ok_or(Error::Overflow);
        self.count = add(self.count, 1)?;
        self.sum_p = add(self.sum_p, p)?;
        self.sum_p2 = add(self.sum_p2, p * p)?;
        self.sum_as = add(self.sum_as, a)?;
        self.sum_as2 = add(self.sum_as2, a * a)?;
        self.sum_zs = add(self.sum_zs, z)?;
        self.sum_zs2 = add(self.sum_zs2, z * z)?;

        for (idx, &a_val) in peaks_buf.iter().enumerate() {
            for &b_val in &peaks_buf[idx + 1..] {
                let (lo, hi) = if a_val < b_val {
                    (a_val, b_val)
                } else {
                    (b_val, a_val)
                };
                let cell = (lo as usize - 1) * self.n + (hi as usize - 1);
                self.joint[cell] = self.joint[cell].checked_add(1).ok_or(Error::Overflow)?;
            }
        }
        Ok(())
    }

    fn merge(mut self, other: Accum) -> Result<Accum> {
        let add = |a: u128, b: u128| a.checked_add(b).ok_or(Error::Overflow);
        self.count = add(self.count, other.count)?;
        self.sum_p = add(self.sum_p, other.sum_p)?;
        self.sum_p2 = add(self.sum_p2, other.sum_p2)?;
        self.sum_as = add(self.sum_as, other.sum_as)?;
        self.sum_as2 = add(self.sum_as2, other.sum_as2)?;
        self.sum_zs = add(self.sum_zs, other.sum_zs)?;
        self.sum_zs2 = add(self.sum_zs2, other.sum_zs2)?;
        for (a, b) in self.joint.iter_mut().zip(other.joint) {
            *a = a.checked_add(b).ok_or(Error::Overflow)?;
        }
        Ok(self)
    }
}

fn mean_rational(sum: u128, count: u128) -> Result<Rational> {
    let num: i128 = sum.try_into().map_err(|_| Error::Overflow)?;
    let den: i128 = count.try_into().map_err(|_| Error::Overflow)?;
    Rational::new(num, den)
}

/// `Var = (count * sum_sq - sum^2) / count^2`, exactly.
fn variance_rational(sum: u128, sum_sq: u128, count: u128) -> Result<Rational> {
    let cs: u128 = count.checked_mul(sum_sq).ok_or(Error::Overflow)?;
    let s2: u128 = sum.checked_mul(sum).ok_or(Error::Overflow)?;
    let num_u = cs.checked_sub(s2).ok_or(Error::Overflow)?;
    let num: i128 = num_u.try_into().map_err(|_| Error::Overflow)?;
    let den_u = count.checked_mul(count).ok_or(Error::Overflow)?;
    let den: i128 = den_u.try_into().map_err(|_| Error::Overflow)?;
    Rational::new(num, den)
}

/// Exact moments of the k-peak count, alternating length and zigzag length
/// over all n! permutations, with the pairwise peak probability table.
///
/// `n <= 12` enforced; n <= 10 runs in seconds single-threaded, 11 and 12
/// fan out over a worker pool. Any `k >= 1` is accepted (for `k >= n` the
/// statistics are deterministic: no peaks, length 1).
pub fn enumerate_moments(n: usize, k: usize) -> Result<ExactMoments> {
    if n == 0 {
        return Err(Error::DomainError("enumeration needs n >= 1".into()));
    }
    if n > MAX_ENUM_N {
        return Err(Error::TooLarge { n, cap: MAX_ENUM_N });
    }
    if k == 0 {
        return Err(Error::DomainError("gap parameter k must be >= 1".into()));
    }

    // One shard per first element; each shard enumerates the (n-1)!
    // arrangements of the remaining values in place.
    let shards: Vec<Accum> = (1..=n as u32)
        .into_par_iter()
        .map(|first| -> Result<Accum> {
            let mut perm: Vec<u32> = Vec::with_capacity(n);
            perm.push(first);
            perm.extend((1..=n as u32).filter(|&v| v != first));
            let mut acc = Accum::new(n);
            let mut peaks_buf = Vec::with_capacity(n);
            loop {
                acc.record(&perm, k, &mut peaks_buf)?;
                if !next_permutation(&mut perm[1..]) {
                    break;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;

    // Deterministic order; integer sums are order-independent anyway.
    let mut merged = Accum::new(n);
    for shard in shards {
        merged = merged.merge(shard)?;
    }

    let count = merged.count;
    let mut joint = Vec::with_capacity(n * (n - 1) / 2);
    for i in 1..=n {
        for j in i + 1..=n {
            let pairs = merged.joint[(i - 1) * n + (j - 1)];
            joint.push(JointPeakProb {
                i,
                j,
                prob: mean_rational(pairs as u128, count)?,
            });
        }
    }

    Ok(ExactMoments {
        n,
        k,
        e_peaks: mean_rational(merged.sum_p, count)?,
        var_peaks: variance_rational(merged.sum_p, merged.sum_p2, count)?,
        e_as: mean_rational(merged.sum_as, count)?,
        var_as: variance_rational(merged.sum_as, merged.sum_as2, count)?,
        e_zs: mean_rational(merged.sum_zs, count)?,
        var_zs: variance_rational(merged.sum_zs, merged.sum_zs2, count)?,
        joint_peak_probs: Some(joint),
    })
}

fn check_formula_domain(n: usize, k: usize) -> Result<()> {
    if k == 0 || n < 2 || k > n - 1 {
        return Err(Error::DomainError(format!(
            "formula needs 1 <= k <= n-1, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Mean number of k-peaks, `(n - k + 2) / 3`. Exact for all `1 <= k <= n-1`.
pub fn e_peaks_formula(n: usize, k: usize) -> Result<Rational> {
    check_formula_domain(n, k)?;
    Rational::new((n - k + 2) as i128, 3)
}

/// Variance of the k-peak count, `(2(n - k) + 4) / 45`.
///
/// Exhaustive enumeration (all `n <= 9`, all `k`) confirms this exactly
/// for `k = 1, n >= 4` and refutes it everywhere else: for `k >= 2` the
/// true variance is strictly larger, and for `n - k <= 2` or `n <= 3` it
/// is smaller. The excess at fixed `k >= 2` converges to a constant as
/// `n` grows (k = 2: 7/90 at n = 8 rising toward ~0.10; k = 5: ~0.44),
/// so the expression keeps the right slope in `n` but the wrong constant.
/// The function evaluates the expression on all of `1 <= k <= n-1`; treat
/// anything outside `k = 1, n >= 4` as the formula's own extrapolation,
/// not as a fact about the statistic.
pub fn var_peaks_formula(n: usize, k: usize) -> Result<Rational> {
    check_formula_domain(n, k)?;
    Rational::new((2 * (n - k) + 4) as i128, 45)
}

/// Probability that value `i` is a k-peak:
/// `(i - k)(i - k + 1) / ((n - k)(n - k + 1))`, zero for `i <= k`.
///
/// Validated against enumeration for all n <= 8, all `1 <= k <= n-1`,
/// all i.
pub fn peak_prob_formula(n: usize, k: usize, i: usize) -> Result<Rational> {
    check_formula_domain(n, k)?;
    if i == 0 || i > n {
        return Err(Error::ValueOutOfRange { value: i, n });
    }
    if i <= k {
        return Ok(Rational::ZERO);
    }
    let a = (i - k) as i128;
    let d = (n - k) as i128;
    Rational::new(a * (a + 1), d * (d + 1))
}

/// Published closed form for the probability that values `i < j` are
/// simultaneously k-peaks:
/// `(i-k)(i-k+1)(j-k-2)(j-k-1) / ((n-k-2)(n-k-1)(n-k)(n-k+1))`,
/// zero whenever `i <= k` or `j <= k + 2`.
///
/// Enumeration (all `n <= 8` with `n - k >= 3`) shows this matches the
/// true probability exactly when `k = 1`, when `i <= k`, or when `j = n`,
/// and deviates on every pair with `k+1 <= i < j <= n-1` once `k >= 2`
/// (already at `j = k+2`, where the formula vanishes but both values can
/// in fact be simultaneous peaks). Compare with
/// [`joint_peak_prob_oracle`], which is ground truth.
pub fn joint_peak_prob_formula(n: usize, k: usize, i: usize, j: usize) -> Result<Rational> {
    check_formula_domain(n, k)?;
    if n - k <= 2 {
        return Err(Error::DegenerateDenominator { n, k });
    }
    if i == 0 || i > n {
        return Err(Error::ValueOutOfRange { value: i, n });
    }
    if j == 0 || j > n {
        return Err(Error::ValueOutOfRange { value: j, n });
    }
    if i >= j {
        return Err(Error::DomainError(format!("need i < j, got i={i}, j={j}")));
    }
    if i <= k || j <= k + 2 {
        return Ok(Rational::ZERO);
    }
    let a = (i - k) as i128;
    let b = (j - k) as i128;
    let d = (n - k) as i128;
    let num = a * (a + 1) * (b - 2) * (b - 1);
    let den = (d - 2) * (d - 1) * d * (d + 1);
    Rational::new(num, den)
}

/// Closed form of `sum over i < j` of [`joint_peak_prob_formula`]:
/// `(5k - 5n + 3)(k - n - 2) / 90`. An algebraic identity about the
/// formula, so it shares the formula's validity region as a statement
/// about the true pairwise probabilities.
pub fn joint_peak_prob_sum_formula(n: usize, k: usize) -> Result<Rational> {
    check_formula_domain(n, k)?;
    if n - k <= 2 {
        return Err(Error::DegenerateDenominator { n, k });
    }
    let n = n as i128;
    let k = k as i128;
    Rational::new((5 * k - 5 * n + 3) * (k - n - 2), 90)
}

/// Exact pairwise peak probability by direct enumeration (n <= 10).
/// Ground truth for [`joint_peak_prob_formula`].
pub fn joint_peak_prob_oracle(n: usize, k: usize, i: usize, j: usize) -> Result<Rational> {
    if n > MAX_JOINT_ORACLE_N {
        return Err(Error::TooLarge {
            n,
            cap: MAX_JOINT_ORACLE_N,
        });
    }
    if i == 0 || i > n {
        return Err(Error::ValueOutOfRange { value: i, n });
    }
    if j == 0 || j > n {
        return Err(Error::ValueOutOfRange { value: j, n });
    }
    if i >= j {
        return Err(Error::DomainError(format!("need i < j, got i={i}, j={j}")));
    }
    let moments = enumerate_moments(n, k)?;
    let table = moments
        .joint_peak_probs
        .expect("enumeration fills the table");
    Ok(table
        .into_iter()
        .find(|e| e.i == i && e.j == j)
        .expect("all pairs present")
        .prob)
}

/// Closed-form moments of the alternating and zigzag lengths.
///
/// `var_as_conjecture` is a CONJECTURE: the `8(n-k)/45` term is proven only
/// as the leading asymptotic, and the `+19/180` constant is heuristic. It
/// is reported for comparison, never asserted. For `k = 1` the variance is
/// a proven exact value, returned in `var_as1` (and equal to the conjecture
/// evaluated at `k = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AltMomentFormulas {
    /// `E[as] = (4(n-k) + 5) / 6`, exact.
    pub e_as: Rational,
    /// `E[zs] = (2(n-k) + 4) / 3`, exact; always `e_as + 1/2`.
    pub e_zs: Rational,
    /// Proven leading term `8(n-k)/45` of `Var(as)`.
    pub var_as_leading: Rational,
    /// CONJECTURE: `8(n-k)/45 + 19/180`.
    pub var_as_conjecture: Rational,
    /// Exact `Var(as) = 8n/45 - 13/180`, only for `k = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub var_as1: Option<Rational>,
}

/// Evaluate the closed-form length moments for `1 <= k <= n-1`.
pub fn as_moment_formulas(n: usize, k: usize) -> Result<AltMomentFormulas> {
    check_formula_domain(n, k)?;
    let gap = (n - k) as i128;
    let var_as1 = if k == 1 {
        Some(Rational::new(32 * n as i128 - 13, 180)?)
    } else {
        None
    };
    Ok(AltMomentFormulas {
        e_as: Rational::new(4 * gap + 5, 6)?,
        e_zs: Rational::new(2 * gap + 4, 3)?,
        var_as_leading: Rational::new(8 * gap, 45)?,
        var_as_conjecture: Rational::new(32 * gap + 19, 180)?,
        var_as1,
    })
}
