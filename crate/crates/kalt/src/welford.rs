//! Numerically stable streaming moments, mergeable across workers.
//!
//! Welford-style single-pass updates extended through the fourth central
//! moment, with the pairwise combination formulas for merging disjoint
//! accumulators. Merging is exact up to floating-point roundoff, so chunked
//! parallel accumulation agrees with a single pass to ~1e-12 relative.

/// Running count, mean and central moment sums M2..M4.
#[derive(Debug, Clone, Copy, Default)]
pub struct MomentAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl MomentAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fold in one observation.
    pub fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2
            - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    /// Combine two accumulators over disjoint sample sets.
    pub fn merge(self, other: MomentAccumulator) -> MomentAccumulator {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let na = self.count as f64;
        let nb = other.count as f64;
        let n = na + nb;
        let delta = other.mean - self.mean;
        let delta2 = delta * delta;

        let mean = self.mean + delta * nb / n;
        let m2 = self.m2 + other.m2 + delta2 * na * nb / n;
        let m3 = self.m3
            + other.m3
            + delta * delta2 * na * nb * (na - nb) / (n * n)
            + 3.0 * delta * (na * other.m2 - nb * self.m2) / n;
        let m4 = self.m4
            + other.m4
            + delta2 * delta2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n)
            + 6.0 * delta2 * (na * na * other.m2 + nb * nb * self.m2) / (n * n)
            + 4.0 * delta * (na * other.m3 - nb * self.m3) / n;

        MomentAccumulator {
            count: self.count + other.count,
            mean,
            m2,
            m3,
            m4,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (zero below two observations).
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count as f64 - 1.0)
        }
    }

    pub fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    /// Fourth central moment estimate `M4 / n`.
    pub fn fourth_central_moment(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m4 / self.count as f64
        }
    }

    /// Standard error of the mean, `sqrt(variance / n)`.
    pub fn std_error_mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.sample_variance() / self.count as f64).sqrt()
        }
    }

    /// Large-sample standard error of the sample variance,
    /// `sqrt((mu4 - s^4) / n)` via the streamed fourth moment.
    pub fn std_error_variance(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let s2 = self.sample_variance();
        let spread = (self.fourth_central_moment() - s2 * s2).max(0.0);
        (spread / self.count as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_moments(data: &[f64]) -> (f64, f64, f64) {
        let n = data.len() as f64;
        let mean = data.iter().sum::<f64>() / n;
        let var = data.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let m4 = data.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
        (mean, var, m4)
    }

    #[test]
    fn matches_direct_two_pass_computation() {
        let data: Vec<f64> = (0..500)
            .map(|i| ((i * 37 + 11) % 97) as f64 / 9.7)
            .collect();
        let mut acc = MomentAccumulator::new();
        for &x in &data {
            acc.push(x);
        }
        let (mean, var, m4) = reference_moments(&data);
        assert!((acc.mean() - mean).abs() < 1e-10);
        assert!((acc.sample_variance() - var).abs() / var < 1e-12);
        assert!((acc.fourth_central_moment() - m4).abs() / m4 < 1e-11);
    }

    #[test]
    fn merge_of_halves_equals_single_pass() {
        let data: Vec<f64> = (0..1000)
            .map(|i| ((i * 13 + 5) % 101) as f64 * 0.37)
            .collect();
        let mut whole = MomentAccumulator::new();
        let mut left = MomentAccumulator::new();
        let mut right = MomentAccumulator::new();
        for (i, &x) in data.iter().enumerate() {
            whole.push(x);
            if i < data.len() / 2 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        let merged = left.merge(right);
        assert_eq!(merged.count(), whole.count());
        assert!((merged.mean() - whole.mean()).abs() / whole.mean().abs() < 1e-12);
        assert!(
            (merged.sample_variance() - whole.sample_variance()).abs() / whole.sample_variance()
                < 1e-12
        );
        assert!(
            (merged.fourth_central_moment() - whole.fourth_central_moment()).abs()
                / whole.fourth_central_moment()
                < 1e-12
        );
    }

    #[test]
    fn merging_with_empty_is_identity() {
        let mut acc = MomentAccumulator::new();
        for x in [1.0, 2.0, 4.0] {
            acc.push(x);
        }
        let merged = MomentAccumulator::new()
            .merge(acc)
            .merge(MomentAccumulator::new());
        assert_eq!(merged.count(), 3);
        assert!((merged.mean() - acc.mean()).abs() < 1e-15);
    }
}
