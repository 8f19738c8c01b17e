//! k-peaks, k-valleys, and longest k-alternating subsequence lengths.
//!
//! # Definitions
//!
//! For a permutation `sigma` of `[1, n]` and a gap `k >= 1`:
//!
//! * A subsequence is *k-alternating* if it alternates starting with a
//!   descent and every consecutive difference has absolute value >= k.
//!   `alternating_len` is the length of the longest such subsequence
//!   (a single element always qualifies, so the length is >= 1).
//! * A subsequence is *k-zigzagging* if it is k-alternating for the
//!   permutation or for its vertical flip, i.e. either starting
//!   orientation is allowed.
//! * A value `i` is a *k-peak* when it ends a maximal k-ascending section
//!   (or starts a maximal k-descending one). Equivalently, scanning away
//!   from `i`'s position in either direction, a value `<= i - k` appears
//!   before any value `> i`; reaching the boundary without meeting a value
//!   `> i` satisfies the condition vacuously. A *k-valley* is the dual
//!   notion (minimal endpoint), obtained by flipping.
//!
//! # Fast paths and references
//!
//! Each statistic has two routes: a quadratic reference that follows the
//! definitions literally ([`is_k_peak_ref`], [`peak_profile_ref`],
//! [`longest_alternating_dp`]) and a certified O(n) pass over maximal
//! sections ([`peak_count_fast`], [`longest_alternating_fast`]). The fast
//! routes must agree with the references on every input; the test suite
//! enforces this exhaustively for n <= 8 and on large random instances,
//! and the `cross-check` feature makes every fast call verify itself.
//!
//! # Residual structure
//!
//! Writing `P` for the k-peak count, `as_len = 2P + E` with `|E| <= 1`.
//! Empirically (verified exhaustively for n <= 8, all k):
//! for k <= n-1 the residual is `E = -1` when the final maximal section
//! ascends and `E = 0` when it descends; when no k-gap move exists at all
//! (k >= n, or k larger than the total spread) `P = 0`, `as_len = 1` and
//! `E = +1`. The zigzag length likewise satisfies
//! `zs_len - as_len ∈ {0, 1}`, with equality exactly when the first
//! maximal section descends.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::scan::{self, ScanSummary};

/// Per-value k-peak indicators and their count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeakProfile {
    /// Gap parameter the profile was computed for.
    pub k: usize,
    /// `indicators[i - 1]` is true iff value `i` is a k-peak.
    pub indicators: Vec<bool>,
    /// Number of true indicators.
    pub count: usize,
}

impl PeakProfile {
    /// Whether value `i` (1-based) is a k-peak.
    pub fn is_peak(&self, i: usize) -> bool {
        i >= 1 && i <= self.indicators.len() && self.indicators[i - 1]
    }

    /// Values that are k-peaks, ascending.
    pub fn peak_values(&self) -> Vec<u32> {
        self.indicators
            .iter()
            .enumerate()
            .filter_map(|(idx, &b)| b.then_some(idx as u32 + 1))
            .collect()
    }
}

/// Longest k-alternating and k-zigzagging lengths plus the peak residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AltLengths {
    /// Longest k-alternating (down-first) subsequence length.
    pub as_len: usize,
    /// Longest k-zigzagging (either orientation) subsequence length.
    pub zs_len: usize,
    /// `as_len - 2 * peak_count`, always in `{-1, 0, +1}`.
    pub residual: i64,
}

fn check_value(i: usize, n: usize) -> Result<()> {
    if i == 0 || i > n {
        return Err(Error::ValueOutOfRange { value: i, n });
    }
    Ok(())
}

/// One directional scan of the k-peak characterization: starting next to
/// the candidate's position and walking outward, a value `<= i - k` must
/// appear before any value `> i`; running off the end without meeting a
/// larger value counts as satisfied.
fn side_certifies(values: impl Iterator<Item = u32>, i: usize, k: usize) -> bool {
    for v in values {
        let v = v as usize;
        if v > i {
            return false;
        }
        if v + k <= i {
            return true;
        }
    }
    true
}

/// Reference k-peak test for value `i`: both directional scans from the
/// position of `i`. O(n) per call; this is the correctness oracle for the
/// fast path. For `k >= n` every value is a non-peak.
pub fn is_k_peak_ref(p: &Permutation, i: usize, k: usize) -> Result<bool> {
    assert!(k >= 1, "gap parameter k must be >= 1");
    let n = p.n();
    check_value(i, n)?;
    if k >= n {
        return Ok(false);
    }
    let values = p.values();
    let pos = values
        .iter()
        .position(|&v| v as usize == i)
        .expect("bijection");
    let right = side_certifies(values[pos + 1..].iter().copied(), i, k);
    if !right {
        return Ok(false);
    }
    Ok(side_certifies(values[..pos].iter().rev().copied(), i, k))
}

/// Reference per-value profile: applies [`is_k_peak_ref`]'s scans to every
/// value. O(n^2) worst case.
pub fn peak_profile_ref(p: &Permutation, k: usize) -> PeakProfile {
    assert!(k >= 1, "gap parameter k must be >= 1");
    let n = p.n();
    let values = p.values();
    let mut indicators = vec![false; n];
    if k < n {
        let mut pos_of = vec![0usize; n];
        for (pos, &v) in values.iter().enumerate() {
            pos_of[v as usize - 1] = pos;
        }
        for i in 1..=n {
            let pos = pos_of[i - 1];
            indicators[i - 1] = side_certifies(values[pos + 1..].iter().copied(), i, k)
                && side_certifies(values[..pos].iter().rev().copied(), i, k);
        }
    }
    let count = indicators.iter().filter(|&&b| b).count();
    PeakProfile {
        k,
        indicators,
        count,
    }
}

pub(crate) fn scan_slice(values: &[u32], k: usize) -> ScanSummary {
    let n = values.len();
    // k >= n admits no k-gap move; clamping to n keeps the cast safe and
    // leaves the scan trigger-free.
    scan::scan(values, k.min(n) as u32)
}

pub(crate) fn peak_count_slice(values: &[u32], k: usize) -> usize {
    scan_slice(values, k).peaks
}

pub(crate) fn alt_len_slice(values: &[u32], k: usize) -> usize {
    let len = scan_slice(values, k).alternating_len();
    #[cfg(feature = "cross-check")]
    {
        let dp = dp_on_f64(values, k as f64);
        assert_eq!(
            len, dp,
            "fast alternating length diverged from DP on {values:?}, k={k}"
        );
    }
    len
}

#[cfg(feature = "cross-check")]
fn dp_on_f64(values: &[u32], gap: f64) -> usize {
    let reals: Vec<f64> = values.iter().map(|&v| v as f64).collect();
    longest_alternating_dp(&reals, gap).expect("nonempty")
}

/// Number of k-peaks via the single-pass section scan. Must equal
/// `peak_profile_ref(p, k).count` on every input.
pub fn peak_count_fast(p: &Permutation, k: usize) -> usize {
    assert!(k >= 1, "gap parameter k must be >= 1");
    let count = peak_count_slice(p.values(), k);
    #[cfg(feature = "cross-check")]
    assert_eq!(
        count,
        peak_profile_ref(p, k).count,
        "fast peak count diverged from reference on {p}, k={k}"
    );
    count
}

/// Number of k-valleys, by duality: value `i` is a k-valley of `p` iff
/// value `n + 1 - i` is a k-peak of `p.flip()`.
pub fn valley_count(p: &Permutation, k: usize) -> usize {
    assert!(k >= 1, "gap parameter k must be >= 1");
    peak_count_fast(&p.flip(), k)
}

/// Longest alternating (down-first) subsequence with every consecutive gap
/// at least `gap`, by dynamic programming over (position,
/// last-step-direction). Works for any distinct reals; integer
/// permutations use `gap = k` and the continuous statistic uses
/// `gap = x`. O(n^2).
pub fn longest_alternating_dp(values: &[f64], gap: f64) -> Result<usize> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    // ending_down[i] / ending_up[i]: longest admissible subsequence ending
    // at i whose final step descends / ascends; 0 = none exists.
    let mut ending_down = vec![0usize; n];
    let mut ending_up = vec![0usize; n];
    let mut best = 1usize;
    for i in 0..n {
        for j in 0..i {
            if values[j] - values[i] >= gap {
                let cand = if ending_up[j] > 0 {
                    ending_up[j] + 1
                } else {
                    2
                };
                if cand > ending_down[i] {
                    ending_down[i] = cand;
                }
            } else if values[i] - values[j] >= gap && ending_down[j] > 0 {
                let cand = ending_down[j] + 1;
                if cand > ending_up[i] {
                    ending_up[i] = cand;
                }
            }
        }
        best = best.max(ending_down[i]).max(ending_up[i]);
    }
    Ok(best)
}

/// Longest k-alternating (down-first) subsequence length via the O(n)
/// section scan. Must equal [`longest_alternating_dp`] on every input.
pub fn longest_alternating_fast(p: &Permutation, k: usize) -> usize {
    assert!(k >= 1, "gap parameter k must be >= 1");
    alt_len_slice(p.values(), k)
}

/// Longest k-zigzagging subsequence length: the best over both starting
/// orientations, `max(as(p), as(flip(p)))`. Exceeds the k-alternating
/// length by at most 1.
pub fn zigzag_length(p: &Permutation, k: usize) -> usize {
    assert!(k >= 1, "gap parameter k must be >= 1");
    scan_slice(p.values(), k).zigzag_len()
}

/// Bundle of the alternating statistics of one permutation.
///
/// Debug builds cross-check the fast alternating length against the DP.
pub fn alt_lengths(p: &Permutation, k: usize) -> AltLengths {
    assert!(k >= 1, "gap parameter k must be >= 1");
    let summary = scan_slice(p.values(), k);
    let as_len = summary.alternating_len();
    let zs_len = summary.zigzag_len();
    #[cfg(debug_assertions)]
    {
        let reals: Vec<f64> = p.values().iter().map(|&v| v as f64).collect();
        debug_assert_eq!(
            as_len,
            longest_alternating_dp(&reals, k as f64).expect("nonempty"),
            "fast alternating length diverged from DP on {p}, k={k}"
        );
    }
    let residual = as_len as i64 - 2 * summary.peaks as i64;
    assert!(
        residual.abs() <= 1,
        "peak residual out of range on {p}, k={k}"
    );
    debug_assert!(zs_len == as_len || zs_len == as_len + 1);
    AltLengths {
        as_len,
        zs_len,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn k_peak_reference_examples() {
        assert!(is_k_peak_ref(&perm("2,1,3"), 2, 1).unwrap());
        assert!(is_k_peak_ref(&perm("1,3,2"), 3, 2).unwrap());
        // identity: only the global maximum is a k-peak
        let id = Permutation::identity(6);
        for i in 1..=5 {
            assert!(!is_k_peak_ref(&id, i, 2).unwrap());
        }
        assert!(is_k_peak_ref(&id, 6, 2).unwrap());
        assert_eq!(
            is_k_peak_ref(&id, 7, 2),
            Err(Error::ValueOutOfRange { value: 7, n: 6 })
        );
        // k >= n: nothing is a peak, not even the maximum
        assert!(!is_k_peak_ref(&perm("1"), 1, 1).unwrap());
        assert!(!is_k_peak_ref(&perm("2,1,3"), 3, 3).unwrap());
    }

    #[test]
    fn profile_examples() {
        let prof = peak_profile_ref(&perm("2,1,3"), 1);
        assert_eq!(prof.count, 2);
        assert_eq!(prof.peak_values(), vec![2, 3]);

        let desc = perm("6,5,4,3,2,1");
        for k in 1..=5 {
            let prof = peak_profile_ref(&desc, k);
            assert_eq!(prof.count, 1, "k={k}");
            assert!(prof.is_peak(6));
        }

        assert_eq!(peak_profile_ref(&perm("1"), 3).count, 0);
    }

    #[test]
    fn fast_peak_count_examples() {
        assert_eq!(peak_count_fast(&perm("2,1,3"), 1), 2);
        assert_eq!(peak_count_fast(&Permutation::identity(7), 3), 1);
        assert_eq!(peak_count_fast(&perm("1,3,2"), 2), 1);
    }

    #[test]
    fn valley_examples() {
        assert_eq!(valley_count(&Permutation::identity(7), 3), 1);
        assert_eq!(valley_count(&perm("1"), 1), 0);
        // flip of 2,1,3 is 2,3,1 whose 1-peak set is {3}; dual value is 1
        assert_eq!(valley_count(&perm("2,1,3"), 1), 1);
    }

    /// Exhaustive check over all subsequences; independent of both the DP
    /// and the scan.
    fn brute_alternating(values: &[f64], gap: f64) -> usize {
        let n = values.len();
        let mut best = 1;
        for mask in 1u32..(1 << n) {
            let sub: Vec<f64> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| values[i])
                .collect();
            let mut ok = true;
            for (step, w) in sub.windows(2).enumerate() {
                let diff = w[0] - w[1];
                let needed_down = step % 2 == 0;
                if needed_down && diff < gap {
                    ok = false;
                    break;
                }
                if !needed_down && -diff < gap {
                    ok = false;
                    break;
                }
            }
            if ok {
                best = best.max(sub.len());
            }
        }
        best
    }

    #[test]
    fn dp_matches_brute_force_on_examples() {
        let cases: [(&[f64], f64, usize); 5] = [
            (&[2.0, 1.0, 3.0], 1.0, 3),
            (&[1.0, 2.0, 3.0, 4.0], 1.0, 1),
            (&[1.0, 3.0, 2.0], 2.0, 1),
            (&[0.9, 0.1, 0.8], 0.5, 3),
            (&[5.0, 4.0, 3.0, 2.0, 1.0], 2.0, 2),
        ];
        for (values, gap, expect) in cases {
            assert_eq!(brute_alternating(values, gap), expect);
            assert_eq!(longest_alternating_dp(values, gap).unwrap(), expect);
        }
        assert_eq!(longest_alternating_dp(&[], 1.0), Err(Error::EmptySequence));
    }

    #[test]
    fn fast_alternating_examples() {
        assert_eq!(longest_alternating_fast(&Permutation::identity(5), 2), 1);
        assert_eq!(longest_alternating_fast(&perm("5,4,3,2,1"), 2), 2);
        assert_eq!(longest_alternating_fast(&perm("2,1,3"), 1), 3);
    }

    #[test]
    fn zigzag_examples() {
        assert_eq!(zigzag_length(&perm("1,3,2"), 2), 2);
        assert_eq!(zigzag_length(&Permutation::identity(5), 2), 2);
        assert_eq!(zigzag_length(&perm("1"), 1), 1);
    }

    #[test]
    fn alt_lengths_examples() {
        let a = alt_lengths(&Permutation::identity(5), 2);
        assert_eq!((a.as_len, a.zs_len, a.residual), (1, 2, -1));

        let b = alt_lengths(&perm("5,4,3,2,1"), 2);
        assert_eq!((b.as_len, b.zs_len, b.residual), (2, 2, 0));

        let c = alt_lengths(&perm("2,1,3"), 1);
        assert_eq!((c.as_len, c.zs_len, c.residual), (3, 3, -1));
    }

    #[test]
    fn gap_beyond_spread_gives_trivial_stats() {
        let p = perm("2,1,3");
        for k in [3, 4, 10] {
            assert_eq!(peak_count_fast(&p, k), 0);
            assert_eq!(longest_alternating_fast(&p, k), 1);
            let a = alt_lengths(&p, k);
            assert_eq!((a.as_len, a.zs_len, a.residual), (1, 1, 1));
        }
    }
}
