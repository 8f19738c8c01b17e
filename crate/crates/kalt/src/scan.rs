//! Single-pass extreme-tracking scan with gap hysteresis.
//!
//! The sequence is swept left to right while tracking the running extreme of
//! the current maximal section. A move of at least `gap` against the current
//! direction closes the section and commits its extreme: the maximum of an
//! ascending section is a k-peak, the minimum of a descending section a
//! k-valley. The trailing section's extreme is committed at the end.
//!
//! This is the shared O(n) fast path behind peak counting, the longest
//! k-alternating length and its real-valued analogue. It is certified
//! against the quadratic reference algorithms by exhaustive and randomized
//! equivalence tests.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Dir {
    Up,
    Down,
}

/// Value types the scan runs over. `drops_by(a, b, gap)` must mean
/// `a - b >= gap` without overflow or precision surprises.
pub(crate) trait GapValue: Copy + PartialOrd {
    fn drops_by(a: Self, b: Self, gap: Self) -> bool;
}

impl GapValue for u32 {
    #[inline]
    fn drops_by(a: Self, b: Self, gap: Self) -> bool {
        a >= b && a - b >= gap
    }
}

impl GapValue for f64 {
    #[inline]
    fn drops_by(a: Self, b: Self, gap: Self) -> bool {
        a - b >= gap
    }
}

/// Outcome of one scan. `sections == 0` means no gap-sized move exists at
/// all (then `first`/`last` are `None` and no extreme was committed).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct ScanSummary {
    pub sections: usize,
    pub first: Option<Dir>,
    pub last: Option<Dir>,
    pub peaks: usize,
    pub valleys: usize,
}

impl ScanSummary {
    /// Longest down-first alternating subsequence length with gaps >= gap.
    ///
    /// The committed extremes form an optimal alternating subsequence of
    /// length `sections + 1`; when it starts with a valley the leading
    /// valley must be dropped to satisfy the down-first convention.
    #[inline]
    pub fn alternating_len(&self) -> usize {
        if self.sections == 0 {
            1
        } else {
            self.sections + 1 - usize::from(self.first == Some(Dir::Up))
        }
    }

    /// Longest alternating length over both starting orientations.
    #[inline]
    pub fn zigzag_len(&self) -> usize {
        if self.sections == 0 {
            1
        } else {
            self.sections + 1
        }
    }
}

enum State<T> {
    // No gap-sized move seen yet; track the prefix extremes.
    Flat { lo: T, hi: T },
    // Inside an ascending section whose running maximum is `hi`.
    Up { hi: T },
    // Inside a descending section whose running minimum is `lo`.
    Down { lo: T },
}

#[inline]
pub(crate) fn scan<T: GapValue>(values: &[T], gap: T) -> ScanSummary {
    scan_impl(values, gap, |_| {})
}

/// Like [`scan`], additionally appending each committed k-peak value to
/// `peaks_out` (in positional order).
#[inline]
pub(crate) fn scan_collect_peaks<T: GapValue>(
    values: &[T],
    gap: T,
    peaks_out: &mut Vec<T>,
) -> ScanSummary {
    scan_impl(values, gap, |v| peaks_out.push(v))
}

fn scan_impl<T: GapValue>(values: &[T], gap: T, mut on_peak: impl FnMut(T)) -> ScanSummary {
    let mut summary = ScanSummary {
        sections: 0,
        first: None,
        last: None,
        peaks: 0,
        valleys: 0,
    };
    let Some((&head, rest)) = values.split_first() else {
        return summary;
    };
    let mut state = State::Flat { lo: head, hi: head };

    for &v in rest {
        state = match state {
            State::Flat { lo, hi } => {
                if T::drops_by(v, lo, gap) {
                    // First section ascends; its left end (the prefix
                    // minimum) is a k-valley.
                    summary.first = Some(Dir::Up);
                    summary.sections = 1;
                    summary.valleys += 1;
                    State::Up { hi: v }
                } else if T::drops_by(hi, v, gap) {
                    // First section descends; its left end (the prefix
                    // maximum) is a k-peak.
                    summary.first = Some(Dir::Down);
                    summary.sections = 1;
                    summary.peaks += 1;
                    on_peak(hi);
                    State::Down { lo: v }
                } else {
                    State::Flat {
                        lo: if v < lo { v } else { lo },
                        hi: if v > hi { v } else { hi },
                    }
                }
            }
            State::Up { hi } => {
                if T::drops_by(hi, v, gap) {
                    // Ascending section ends at its maximum: commit a peak.
                    summary.sections += 1;
                    summary.peaks += 1;
                    on_peak(hi);
                    State::Down { lo: v }
                } else {
                    State::Up {
                        hi: if v > hi { v } else { hi },
                    }
                }
            }
            State::Down { lo } => {
                if T::drops_by(v, lo, gap) {
                    summary.sections += 1;
                    summary.valleys += 1;
                    State::Up { hi: v }
                } else {
                    State::Down {
                        lo: if v < lo { v } else { lo },
                    }
                }
            }
        };
    }

    match state {
        State::Flat { .. } => {}
        State::Up { hi } => {
            summary.peaks += 1;
            on_peak(hi);
            summary.last = Some(Dir::Up);
        }
        State::Down { .. } => {
            summary.valleys += 1;
            summary.last = Some(Dir::Down);
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_sections_below_gap() {
        let s = scan(&[2u32, 1, 3], 3);
        assert_eq!(s.sections, 0);
        assert_eq!((s.peaks, s.valleys), (0, 0));
        assert_eq!(s.alternating_len(), 1);
        assert_eq!(s.zigzag_len(), 1);
    }

    #[test]
    fn identity_has_one_ascending_section() {
        let v: Vec<u32> = (1..=6).collect();
        let s = scan(&v, 1);
        assert_eq!(s.sections, 1);
        assert_eq!(s.first, Some(Dir::Up));
        assert_eq!(s.last, Some(Dir::Up));
        assert_eq!((s.peaks, s.valleys), (1, 1));
        assert_eq!(s.alternating_len(), 1);
        assert_eq!(s.zigzag_len(), 2);
    }

    #[test]
    fn committed_peaks_in_order() {
        let mut peaks = Vec::new();
        let s = scan_collect_peaks(&[2u32, 1, 3], 1, &mut peaks);
        assert_eq!(peaks, vec![2, 3]);
        assert_eq!(s.alternating_len(), 3);
    }

    #[test]
    fn real_valued_scan() {
        let s = scan(&[0.9f64, 0.1, 0.8], 0.5);
        assert_eq!(s.sections, 2);
        assert_eq!(s.first, Some(Dir::Down));
        assert_eq!(s.alternating_len(), 3);
    }
}
