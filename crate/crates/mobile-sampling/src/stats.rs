//! Streaming mean/variance accumulation (Welford) with deterministic merging.

/// Running first and second moments of a scalar sample.
///
/// Chunk-local accumulators are merged in a fixed order by the parallel
/// drivers, so a Monte Carlo mean and its standard error are identical for a
/// given seed regardless of thread count.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningStats {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Merges another accumulator (Chan et al. pairwise update).
    pub fn merge(&mut self, other: &RunningStats) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n1 = self.n as f64;
        let n2 = other.n as f64;
        let d = other.mean - self.mean;
        let n = n1 + n2;
        self.mean += d * n2 / n;
        self.m2 += other.m2 + d * d * n1 * n2 / n;
        self.n += other.n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            f64::INFINITY
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

/// Least-squares line `y = intercept + slope * x`; returns
/// `(intercept, slope, residual_rms)`.
///
/// Used for the `D + c/R` density tail, Monte Carlo error-vs-budget slopes,
/// and sublevel decay exponents. With fewer than two distinct abscissae the
/// slope is 0 and the intercept is the plain mean.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len(), "linear_fit needs paired samples");
    let n = x.len() as f64;
    if x.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(u, v)| {
            let r = v - intercept - slope * u;
            r * r
        })
        .sum();
    (intercept, slope, (ss / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_formulas() {
        let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
        let mut s = RunningStats::default();
        for &x in &xs {
            s.push(x);
        }
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((s.mean() - mean).abs() < 1e-12);
        assert!((s.variance() - var).abs() < 1e-12);
        assert!((s.stderr() - (var / 5.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn merge_equals_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.25).collect();
        let mut whole = RunningStats::default();
        for &x in &xs {
            whole.push(x);
        }
        let mut merged = RunningStats::default();
        for chunk in xs.chunks(64) {
            let mut part = RunningStats::default();
            for &x in chunk {
                part.push(x);
            }
            merged.merge(&part);
        }
        assert_eq!(whole.count(), merged.count());
        assert!((whole.mean() - merged.mean()).abs() < 1e-12);
        assert!((whole.variance() - merged.variance()).abs() < 1e-9);
    }

    #[test]
    fn degenerate_cases() {
        let mut s = RunningStats::default();
        assert_eq!(s.count(), 0);
        s.push(3.0);
        assert_eq!(s.variance(), 0.0);
        assert!(s.stderr().is_infinite());
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.5 - 0.25 * v).collect();
        let (a, b, rms) = linear_fit(&x, &y);
        assert!((a - 3.5).abs() < 1e-12);
        assert!((b + 0.25).abs() < 1e-12);
        assert!(rms < 1e-12);
        // Degenerate abscissa: slope 0, intercept = mean.
        let (a0, b0, _) = linear_fit(&[2.0, 2.0], &[1.0, 3.0]);
        assert_eq!(b0, 0.0);
        assert!((a0 - 2.0).abs() < 1e-12);
    }
}
