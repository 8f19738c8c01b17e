//! Windowed ("local") k-peak statistics and the truncation bound.
//!
//! A value `i` is a *local k-peak* with window radius `m` when the k-peak
//! scans of [`crate::kstats::is_k_peak_ref`] resolve within `m` positions
//! on each side of `i`'s position. Reaching the permutation boundary inside
//! the window settles a scan the same way it settles the unbounded scan, so
//! every local k-peak is a k-peak (`Y_i <= P_i` pointwise). Exhausting the
//! window mid-permutation without resolution leaves the value uncertified.
//!
//! The local count `Y` differs from the true peak count `P` only on a
//! rare event; `P(Y < P)` is bounded by [`tv_bound`], which also bounds the
//! total variation distance between the laws of `Y` and `P`.
//!
//! Note: the position-indexed variant of the indicators (was position `p` a
//! local peak?) is the composition of [`local_profile`]'s value-indexed
//! indicators with the inverse permutation and has the same distribution;
//! no separate operation is provided.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kstats::peak_count_slice;
use crate::permutation::Permutation;

/// Per-value local k-peak indicators for one window radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalPeakProfile {
    /// Window radius in positions.
    pub m: usize,
    /// `y_indicators[i - 1]` is true iff value `i` is a local k-peak.
    pub y_indicators: Vec<bool>,
    /// Number of true indicators.
    pub y_count: usize,
}

/// One windowed directional scan. `window` holds at most `m` values walking
/// away from the candidate; `hits_boundary` says the window reaches the end
/// of the permutation.
fn side_certifies_window(
    window: impl Iterator<Item = u32>,
    hits_boundary: bool,
    i: usize,
    k: usize,
) -> bool {
    for v in window {
        let v = v as usize;
        if v > i {
            return false;
        }
        if v + k <= i {
            return true;
        }
    }
    hits_boundary
}

fn local_peak_at(values: &[u32], pos: usize, i: usize, k: usize, m: usize) -> bool {
    let n = values.len();
    let right_end = (pos + 1 + m).min(n);
    let right = side_certifies_window(
        values[pos + 1..right_end].iter().copied(),
        pos + 1 + m >= n,
        i,
        k,
    );
    if !right {
        return false;
    }
    let left_start = pos.saturating_sub(m);
    side_certifies_window(
        values[left_start..pos].iter().rev().copied(),
        pos <= m,
        i,
        k,
    )
}

/// Whether value `i` is a local k-peak with window radius `m`.
/// Implies `is_k_peak_ref(p, i, k)`.
pub fn is_local_k_peak(p: &Permutation, i: usize, k: usize, m: usize) -> Result<bool> {
    assert!(k >= 1, "gap parameter k must be >= 1");
    assert!(m >= 1, "window radius m must be >= 1");
    let n = p.n();
    if i == 0 || i > n {
        return Err(Error::ValueOutOfRange { value: i, n });
    }
    if k >= n {
        return Ok(false);
    }
    let pos = p
        .values()
        .iter()
        .position(|&v| v as usize == i)
        .expect("bijection");
    Ok(local_peak_at(p.values(), pos, i, k, m))
}

pub(crate) fn local_count_slice(values: &[u32], k: usize, m: usize) -> usize {
    let n = values.len();
    if k >= n {
        return 0;
    }
    values
        .iter()
        .enumerate()
        .filter(|&(pos, &v)| local_peak_at(values, pos, v as usize, k, m))
        .count()
}

/// All local k-peak indicators in one pass. O(n * m).
pub fn local_profile(p: &Permutation, k: usize, m: usize) -> LocalPeakProfile {
    assert!(k >= 1, "gap parameter k must be >= 1");
    assert!(m >= 1, "window radius m must be >= 1");
    let n = p.n();
    let values = p.values();
    let mut y_indicators = vec![false; n];
    if k < n {
        for (pos, &v) in values.iter().enumerate() {
            y_indicators[v as usize - 1] = local_peak_at(values, pos, v as usize, k, m);
        }
    }
    let y_count = y_indicators.iter().filter(|&&b| b).count();
    LocalPeakProfile {
        m,
        y_indicators,
        y_count,
    }
}

/// Truncation bound `3 n (k/n)^m` on both `P(Y < P)` and the total
/// variation distance between the laws of the local and true peak counts.
pub fn tv_bound(n: usize, k: usize, m: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::DomainError(format!(
            "tv bound needs 1 <= k < n, got n={n}, k={k}"
        )));
    }
    if m == 0 {
        return Err(Error::DomainError("window radius m must be >= 1".into()));
    }
    Ok(3.0 * n as f64 * (k as f64 / n as f64).powi(m as i32))
}

/// Smallest window radius `m >= 1` with `tv_bound(n, k, m) <= n^-alpha`.
///
/// For `k` proportional to `n` this lands within one of the closed-form
/// radius `(-(1 + alpha) ln n - ln 3) / ln(k/n)`.
pub fn choose_window(n: usize, k: usize, alpha: f64) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::DomainError(format!(
            "window selection needs 1 <= k < n, got n={n}, k={k}"
        )));
    }
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::DomainError(format!(
            "alpha must exceed 1, got {alpha}"
        )));
    }
    let target = (n as f64).powf(-alpha);
    // k/n < 1 strictly, so the bound decays geometrically and the loop
    // terminates (worst case when the power underflows to zero). Evaluated
    // through tv_bound itself so the returned m satisfies the contract
    // under the exact same arithmetic.
    let mut m = 1usize;
    while tv_bound(n, k, m)? > target {
        m += 1;
    }
    Ok(m)
}

/// The event whose probability [`tv_bound`] controls: does the window
/// radius `m` miss at least one true k-peak of `p`?
pub fn mismatch_indicator(p: &Permutation, k: usize, m: usize) -> bool {
    assert!(k >= 1, "gap parameter k must be >= 1");
    assert!(m >= 1, "window radius m must be >= 1");
    mismatch_slice(p.values(), k, m)
}

pub(crate) fn mismatch_slice(values: &[u32], k: usize, m: usize) -> bool {
    local_count_slice(values, k, m) < peak_count_slice(values, k)
}
