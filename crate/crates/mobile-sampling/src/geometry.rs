//! Ball volumes, sphere measures, the certification constant, and small
//! vector/window helpers used throughout the crate.
//!
//! Conventions: `d` is the ambient dimension, `omega_k = unit_ball_volume(k)`
//! is the Lebesgue volume of the unit ball in `R^k` (with `omega_0 = 1`), and
//! surface content is `(d-1)`-dimensional Hausdorff measure, so the unit
//! sphere `S^{d-1}` carries total measure `d * omega_d`.

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Volume of the unit ball in `R^k`: `omega_k = pi^{k/2} / Gamma(k/2 + 1)`.
///
/// Evaluated in log space so large `k` neither overflows nor loses the small
/// leading digits (`omega_50 ~ 1.7e-13`). `omega_0 = 1` by convention.
pub fn unit_ball_volume(k: usize) -> f64 {
    if k == 0 {
        // Gamma(1) = 1 exactly; ln_gamma's rounding would otherwise leak a
        // few ulps into the counting measure used for points (d = 1 slices).
        return 1.0;
    }
    let k = k as f64;
    ((k / 2.0) * std::f64::consts::PI.ln() - ln_gamma(k / 2.0 + 1.0)).exp()
}

/// Total surface measure of the unit sphere: `H^{d-1}(S^{d-1}) = d * omega_d`.
pub fn sphere_measure(d: usize) -> f64 {
    d as f64 * unit_ball_volume(d)
}

/// The dimensional constant `A_d = (omega_d / omega_{d-1}) * 3 d^2 / (2d + 4)`.
///
/// This is the factor in the certification threshold `phi(0) * A_d * W(K)`
/// that a surface's lower density must exceed, and `A_d / d` multiplies the
/// mean width in the nodal-average bound. Grows like `sqrt(d)`; `A_1 = 1`,
/// `A_2 = 3 pi / 4`.
pub fn certification_constant(d: usize) -> Result<f64> {
    if d < 1 {
        return Err(Error::UnsupportedDimension { dim: d, min: 1, max: usize::MAX });
    }
    let df = d as f64;
    Ok(unit_ball_volume(d) / unit_ball_volume(d - 1) * 3.0 * df * df / (2.0 * df + 4.0))
}

/// Dot product. Lengths must match; debug-asserted in hot paths.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Squared Euclidean distance between two points.
#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Checks that `theta` is a unit vector of the expected dimension.
/// Tolerance 1e-9 on the norm, matching the support-function contract.
pub fn check_unit_direction(theta: &[f64], dim: usize) -> Result<()> {
    if theta.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: theta.len() });
    }
    let n = norm(theta);
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitDirection { norm: n });
    }
    Ok(())
}

/// An axis-aligned box used as an observation window for sampling centers,
/// sup-norm scans, and ratio experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Window {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter(
                "window bounds must be nonempty and of equal dimension".into(),
            ));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidParameter(
                "window must satisfy lo < hi on every axis".into(),
            ));
        }
        Ok(Window { lo, hi })
    }

    /// Cube `[-half, half]^d` centered at the origin.
    pub fn centered_cube(dim: usize, half: f64) -> Result<Self> {
        if !(half > 0.0) {
            return Err(Error::InvalidParameter("window half-side must be positive".into()));
        }
        Window::new(vec![-half; dim], vec![half; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.hi[axis] - self.lo[axis]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).fold(f64::INFINITY, f64::min)
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| 0.5 * (a + b)).collect()
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).product()
    }

    /// Radius of the smallest origin-centered ball containing the window
    /// relative to its own center (half the diagonal).
    pub fn circumradius(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i) * self.side(i)).sum::<f64>().sqrt() * 0.5
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Uniform sample from the window.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| rng.random_range(*a..*b))
            .collect()
    }
}

/// Compensated (Kahan) summation; used where sums of many quadrature weights
/// must stay accurate to ~1e-12 absolute.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes_match_exact_forms() {
        // omega_0 = 1, omega_1 = 2, omega_2 = pi, omega_3 = 4 pi / 3.
        assert!((unit_ball_volume(0) - 1.0).abs() < 1e-10);
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-10);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-10);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((unit_ball_volume(4) - PI * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn ball_volume_recursion_holds_to_k_20() {
        // omega_k = omega_{k-1} * sqrt(pi) * Gamma((k+1)/2) / Gamma(k/2 + 1).
        for k in 1..=20 {
            let kf = k as f64;
            let ratio =
                (0.5 * PI.ln() + ln_gamma((kf + 1.0) / 2.0) - ln_gamma(kf / 2.0 + 1.0)).exp();
            let rec = unit_ball_volume(k - 1) * ratio;
            let direct = unit_ball_volume(k);
            assert!(
                (rec - direct).abs() <= 1e-12 * direct.max(1.0),
                "recursion fails at k = {k}: {rec} vs {direct}"
            );
        }
    }

    #[test]
    fn sphere_measure_small_dims() {
        assert!((sphere_measure(1) - 2.0).abs() < 1e-12); // two points
        assert!((sphere_measure(2) - 2.0 * PI).abs() < 1e-12); // circle
        assert!((sphere_measure(3) - 4.0 * PI).abs() < 1e-12); // sphere
    }

    #[test]
    fn certification_constant_exact_values() {
        // A_1 = 1 and A_2 = 3 pi / 4, both exact up to rounding.
        assert!((certification_constant(1).unwrap() - 1.0).abs() < 1e-12);
        assert!((certification_constant(2).unwrap() - 3.0 * PI / 4.0).abs() < 1e-12);
        // A_3 = 3.6 and A_4 = 3 pi / 2 follow from the closed form.
        assert!((certification_constant(3).unwrap() - 3.6).abs() < 1e-12);
        assert!((certification_constant(4).unwrap() - 1.5 * PI).abs() < 1e-12);
        assert!(certification_constant(0).is_err());
    }

    #[test]
    fn certification_constant_vs_width_normalization() {
        // A_2 relates to the "sphere measure over two widths" normalization
        // d*omega_d / (2*omega_{d-1}) by a factor exactly 3/2 in d = 2.
        let a2 = certification_constant(2).unwrap();
        let norm2 = 2.0 * unit_ball_volume(2) / (2.0 * unit_ball_volume(1));
        assert!((a2 / norm2 - 1.5).abs() < 1e-12);
    }

    #[test]
    fn certification_constant_grows_like_sqrt_d() {
        // Numerically verified range of A_d / sqrt(d) for d <= 50:
        // minimum 1.0 at d = 1, maximum ~3.5973 at d = 50.
        for d in 1..=50 {
            let r = certification_constant(d).unwrap() / (d as f64).sqrt();
            assert!(r > 0.9 && r < 3.7, "A_d/sqrt(d) out of range at d = {d}: {r}");
        }
    }

    #[test]
    fn window_basics() {
        let w = Window::centered_cube(2, 3.0).unwrap();
        assert_eq!(w.dim(), 2);
        assert!((w.volume() - 36.0).abs() < 1e-12);
        assert!(w.contains(&[3.0, -3.0]));
        assert!(!w.contains(&[3.1, 0.0]));
        assert!((w.circumradius() - 18.0_f64.sqrt()).abs() < 1e-12);
        assert!(Window::new(vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn window_sampling_stays_inside() {
        use rand::SeedableRng;
        let w = Window::new(vec![-1.0, 2.0], vec![1.0, 5.0]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let x = w.sample(&mut rng);
            assert!(w.contains(&x));
        }
    }

    #[test]
    fn kahan_sum_compensates() {
        let mut s = KahanSum::default();
        for _ in 0..1_000_000 {
            s.add(0.1);
        }
        assert!((s.value() - 100_000.0).abs() < 1e-9);
    }
}
