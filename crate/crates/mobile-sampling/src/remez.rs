//! Remez-type inequalities for 1-D band-limited functions: recovering the
//! global sup norm from a positive-measure subset, sublevel-measure decay,
//! and the log-integral bound they imply.
//!
//! All checks run on a finite exponential sum `g` with `‖g‖_∞ <= 1` and
//! `|g(0)| > 1/4`, with `sigma` its spectral radius. The inequality constant
//! is a sweep parameter: the lemma guarantees existence of some universal
//! `C`, and the suite gates pass/fail at `C = 8` while recording the minimal
//! passing value per instance.

use crate::bandlimited::{LineFunction, SliceFunction};
use crate::error::{Error, Result};
use crate::geometry::KahanSum;
use crate::stats::linear_fit;

/// Grid resolution multiplier for sublevel root bracketing (steps per unit
/// per unit of spectral radius).
const SUBLEVEL_SCAN: f64 = 64.0;

/// Finer resolution for certified sup-norm scans.
const SUP_SCAN: f64 = 512.0;

/// Bisection stops at this interval width.
const REFINE_TOLERANCE: f64 = 1e-12;

/// Pass/fail gate for the property suites.
pub const DEFAULT_REMEZ_CONSTANT: f64 = 8.0;

/// Values swept when searching for the minimal passing constant.
pub const CONSTANT_SWEEP: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

/// A finite union of intervals in `[0, ∞)`, normalized to sorted disjoint
/// form on construction.
#[derive(Debug, Clone)]
pub struct IntervalUnion {
    intervals: Vec<(f64, f64)>,
}

impl IntervalUnion {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidParameter(
                "an interval union needs at least one interval".into(),
            ));
        }
        for (a, b) in &intervals {
            if !a.is_finite() || !b.is_finite() || !(b > a) || *a < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "invalid interval [{a}, {b}]: need 0 <= a < b < inf"
                )));
            }
        }
        intervals.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some((_, end)) if a <= *end => *end = end.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(IntervalUnion { intervals: merged })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn sup(&self) -> f64 {
        self.intervals.last().map(|(_, b)| *b).unwrap_or(0.0)
    }
}

fn check_real(g: &SliceFunction) -> Result<()> {
    if !g.is_real_valued() {
        return Err(Error::InvalidParameter(
            "level-set scans need a real-valued line function".into(),
        ));
    }
    Ok(())
}

fn check_unit_sup(g: &SliceFunction) -> Result<()> {
    if g.certified_sup() > 1.0 + 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "this inequality assumes a certified sup norm <= 1 (got {}); rescale first",
            g.certified_sup()
        )));
    }
    Ok(())
}

fn check_anchor_quarter(g: &SliceFunction) -> Result<f64> {
    let g0 = g.value(0.0).abs();
    if !(g0 > 0.25) {
        return Err(Error::InvalidParameter(format!(
            "this inequality assumes |g(0)| > 1/4 (got {g0})"
        )));
    }
    Ok(g0)
}

fn scan_steps(scale: f64, sigma: f64, length: f64) -> usize {
    let step = 1.0 / (scale * sigma.max(1.0));
    ((length / step).ceil() as usize).clamp(16, 50_000_000)
}

/// Upper bound for `sup |g|` on `[lo, hi]`: grid maximum plus the
/// off-grid derivative correction.
fn sup_upper(g: &SliceFunction, lo: f64, hi: f64) -> f64 {
    let n = scan_steps(SUP_SCAN, g.spectral_radius(), hi - lo);
    let dt = (hi - lo) / n as f64;
    let grid_max = g
        .scan_values(lo, dt, n + 1)
        .into_iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    grid_max + g.derivative_bound() * dt / 2.0
}

/// Lower bound for `sup |g|` on a set: plain grid maximum (no correction),
/// so the recovery inequality is tested with its right side understated.
fn sup_lower(g: &SliceFunction, f: &IntervalUnion) -> f64 {
    let mut best = 0.0_f64;
    for (a, b) in f.intervals() {
        let n = scan_steps(SUP_SCAN, g.spectral_radius(), b - a);
        let dt = (b - a) / n as f64;
        best = g
            .scan_values(*a, dt, n + 1)
            .into_iter()
            .fold(best, |acc, v| acc.max(v.abs()));
    }
    best
}

fn bisect_level(g: &SliceFunction, eps: f64, mut a: f64, mut b: f64, mut ha: f64) -> f64 {
    // h(t) = |g(t)| - eps changes sign (weakly) between a and b.
    while b - a > REFINE_TOLERANCE {
        let m = 0.5 * (a + b);
        let hm = g.value(m).abs() - eps;
        if hm == 0.0 {
            return m;
        }
        if ha * hm < 0.0 || (ha == 0.0 && hm > 0.0) {
            b = m;
        } else {
            a = m;
            ha = hm;
        }
    }
    0.5 * (a + b)
}

fn bisect_sign(g: &SliceFunction, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    while b - a > REFINE_TOLERANCE {
        let m = 0.5 * (a + b);
        let gm = g.value(m);
        if gm == 0.0 {
            return m;
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

/// Lebesgue measure of `{t in [0, R) : |g(t)| <= eps}` by scan and
/// level-crossing bisection. Components narrower than a scan cell are still
/// captured when they surround a sign change of `g`; only dips around
/// even-order near-zeros are resolution-limited (an undercount, so bound
/// checks stay conservative).
pub fn sublevel_measure(g: &SliceFunction, big_r: f64, eps: f64) -> Result<f64> {
    if !(big_r > 0.0) || !big_r.is_finite() {
        return Err(Error::InvalidParameter(
            "sublevel measure needs a positive finite interval length".into(),
        ));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidParameter("sublevel threshold must be positive".into()));
    }
    check_real(g)?;
    if eps >= g.certified_sup() && g.certified_sup() > 1e-13 {
        // |g| never exceeds its certified sup, so the sublevel set is
        // everything; the scan would be defeated by round-off at the peaks.
        return Ok(big_r);
    }
    let n = scan_steps(SUBLEVEL_SCAN, g.spectral_radius(), big_r);
    let dt = big_r / n as f64;
    let vals = g.scan_values(0.0, dt, n + 1);
    let grid_max = vals.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
    if grid_max <= 1e-13 {
        return Err(Error::DegenerateSlice { grid_max });
    }
    let inside = |v: f64| v.abs() <= eps;
    let mut total = KahanSum::default();
    let mut open: Option<f64> = if inside(vals[0]) { Some(0.0) } else { None };
    for i in 0..n {
        let (a, b) = (vals[i], vals[i + 1]);
        let (ta, tb) = (i as f64 * dt, (i + 1) as f64 * dt);
        if inside(a) != inside(b) {
            let t = bisect_level(g, eps, ta, tb, a.abs() - eps);
            match open.take() {
                Some(start) => total.add(t - start),
                None => open = Some(t),
            }
        } else if !inside(a) && a * b < 0.0 {
            // Both endpoints above the level but g changes sign: a sublevel
            // component hides inside the cell around the zero.
            let tau = bisect_sign(g, ta, tb, a);
            let left = bisect_level(g, eps, ta, tau, a.abs() - eps);
            let right = bisect_level(g, eps, tau, tb, g.value(tau).abs() - eps);
            total.add(right - left);
        }
    }
    if let Some(start) = open {
        total.add(big_r - start);
    }
    Ok(total.value().clamp(0.0, big_r))
}

/// Outcome of the sup-norm recovery inequality
/// `sup_{[0,R)} |g| <= C (2eR/m_1(F))^{C + e sigma R} sup_F |g|`,
/// plus the unit-normalized final-form variant
/// `1 <= 8 (2eR/m_1(F))^{e sigma R} sup_F |g|`.
#[derive(Debug, Clone, Copy)]
pub struct RemezReport {
    /// Upper estimate of `sup_{[0,R)} |g|`.
    pub sup_all: f64,
    /// Lower estimate of `sup_F |g|`.
    pub sup_on_f: f64,
    pub constant: f64,
    /// `log` of the right-hand side (the side itself may be astronomically
    /// large).
    pub log_rhs: f64,
    pub pass: bool,
    pub log_variant_rhs: f64,
    pub variant_pass: bool,
    pub sigma: f64,
    pub set_measure: f64,
}

/// Checks the recovery inequality for the supplied constant. `sigma` is
/// always the spectral radius of `g` itself — the sharpest admissible value.
pub fn remez_check(
    g: &SliceFunction,
    big_r: f64,
    f_set: &IntervalUnion,
    constant: f64,
) -> Result<RemezReport> {
    if !(big_r > 0.0) || !big_r.is_finite() {
        return Err(Error::InvalidParameter("remez check needs a positive interval".into()));
    }
    if !(constant > 0.0) {
        return Err(Error::InvalidParameter("remez constant must be positive".into()));
    }
    if f_set.sup() > big_r + 1e-12 {
        return Err(Error::InvalidParameter(
            "the comparison set must lie inside [0, R)".into(),
        ));
    }
    check_real(g)?;
    check_unit_sup(g)?;
    check_anchor_quarter(g)?;
    let measure = f_set.measure();
    if !(measure > 0.0) {
        return Err(Error::InvalidParameter(
            "the comparison set must have positive measure".into(),
        ));
    }
    let sigma = g.spectral_radius();
    let sup_all = sup_upper(g, 0.0, big_r);
    let sup_on_f = sup_lower(g, f_set);
    let ratio_log = (2.0 * std::f64::consts::E * big_r / measure).ln();
    let log_rhs = constant.ln()
        + (constant + std::f64::consts::E * sigma * big_r) * ratio_log
        + sup_on_f.ln();
    let log_variant_rhs =
        (8.0_f64).ln() + std::f64::consts::E * sigma * big_r * ratio_log + sup_on_f.ln();
    Ok(RemezReport {
        sup_all,
        sup_on_f,
        constant,
        log_rhs,
        pass: sup_all.ln() <= log_rhs + 1e-12,
        log_variant_rhs,
        variant_pass: 0.0 <= log_variant_rhs + 1e-12,
        sigma,
        set_measure: measure,
    })
}

/// Sweeps the constant grid and returns the smallest value for which the
/// recovery inequality holds (`None` when even the largest fails).
pub fn minimal_passing_constant(
    g: &SliceFunction,
    big_r: f64,
    f_set: &IntervalUnion,
) -> Result<Option<f64>> {
    for c in CONSTANT_SWEEP {
        if remez_check(g, big_r, f_set, c)?.pass {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Sublevel measures against the decay bound `m_1 <= C R (C eps)^{1/(C sigma R)}`.
#[derive(Debug, Clone)]
pub struct SublevelReport {
    pub epsilons: Vec<f64>,
    pub measures: Vec<f64>,
    pub bounds: Vec<f64>,
    pub constant: f64,
    pub sigma: f64,
    pub big_r: f64,
    /// Log-log slope of the measured decay, fitted over the epsilons where
    /// the measure is strictly between 0 and R.
    pub fitted_exponent: Option<f64>,
    pub pass: bool,
}

fn decay_bound(constant: f64, sigma: f64, big_r: f64, eps: f64) -> f64 {
    let s = constant * sigma * big_r;
    if s == 0.0 {
        // Spectral radius zero: |g| is constant, and the bound degenerates
        // to the limit 0 or infinity depending on C*eps.
        return if constant * eps >= 1.0 { f64::INFINITY } else { 0.0 };
    }
    constant * big_r * (constant * eps).powf(1.0 / s)
}

/// Evaluates the sublevel decay bound on a logarithmic epsilon grid over
/// `[1e-8, 1]` (eight points per decade).
pub fn sublevel_decay_check(
    g: &SliceFunction,
    big_r: f64,
    constant: f64,
) -> Result<SublevelReport> {
    check_real(g)?;
    check_unit_sup(g)?;
    check_anchor_quarter(g)?;
    if !(constant > 0.0) {
        return Err(Error::InvalidParameter("decay constant must be positive".into()));
    }
    let sigma = g.spectral_radius();
    let n_eps = 8 * 8 + 1;
    let epsilons: Vec<f64> = (0..n_eps)
        .map(|i| 10f64.powf(-8.0 + i as f64 / 8.0))
        .collect();
    let mut measures = Vec::with_capacity(n_eps);
    let mut bounds = Vec::with_capacity(n_eps);
    let mut pass = true;
    for eps in &epsilons {
        let m = sublevel_measure(g, big_r, *eps)?;
        let b = decay_bound(constant, sigma, big_r, *eps);
        if m > b + 1e-12 {
            pass = false;
        }
        measures.push(m);
        bounds.push(b);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = epsilons
        .iter()
        .zip(&measures)
        .filter(|(_, m)| **m > 0.0 && **m < big_r)
        .map(|(e, m)| (e.ln(), m.ln()))
        .unzip();
    let fitted_exponent = if xs.len() >= 3 {
        Some(linear_fit(&xs, &ys).1)
    } else {
        None
    };
    Ok(SublevelReport {
        epsilons,
        measures,
        bounds,
        constant,
        sigma,
        big_r,
        fitted_exponent,
        pass,
    })
}

/// The log-integral bound `int_0^R log(1/|g|) <= C(1 + log C) sigma R^2 +
/// R log C` obtained by integrating the sublevel decay, with a direct
/// quadrature cross-check.
#[derive(Debug, Clone, Copy)]
pub struct LogIntegralBound {
    /// Layer-cake evaluation over the sublevel measures.
    pub integral: f64,
    /// Direct clipped Riemann quadrature of `log(1/|g|)`.
    pub integral_direct: f64,
    /// Exact integral of `min(R, C R (C e^{-lambda})^{1/(C sigma R)})`.
    pub bound: f64,
    /// `integral / (sigma R^2)` — the effective constant.
    pub effective_constant: f64,
    pub pass: bool,
}

/// Trapezoid cell of `int m(eps) d(ln eps)` with recursive refinement at a
/// geometric midpoint until the two-panel estimate stabilizes. Jumps in the
/// measure (flat functions) converge geometrically to the cap depth.
fn layer_cake_cell(
    g: &SliceFunction,
    big_r: f64,
    eps_a: f64,
    eps_b: f64,
    m_a: f64,
    m_b: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let coarse = (eps_b / eps_a).ln() * 0.5 * (m_a + m_b);
    if depth >= 24 {
        return Ok(coarse);
    }
    let mid = (eps_a * eps_b).sqrt();
    let m_mid = sublevel_measure(g, big_r, mid)?;
    let fine = (mid / eps_a).ln() * 0.5 * (m_a + m_mid)
        + (eps_b / mid).ln() * 0.5 * (m_mid + m_b);
    if (fine - coarse).abs() <= tol {
        return Ok(fine);
    }
    Ok(layer_cake_cell(g, big_r, eps_a, mid, m_a, m_mid, tol, depth + 1)?
        + layer_cake_cell(g, big_r, mid, eps_b, m_mid, m_b, tol, depth + 1)?)
}

/// Computes `int_0^R log(1/|g|) dt` via the layer-cake identity
/// `int_0^1 m_1(|g| <= eps) d(log eps spine) = int m(eps)/eps d eps`,
/// evaluated adaptively over the decay report's epsilon grid with a
/// linear-decay tail below the smallest epsilon.
pub fn log_integral_bound_check(
    g: &SliceFunction,
    big_r: f64,
    constant: f64,
) -> Result<LogIntegralBound> {
    let report = sublevel_decay_check(g, big_r, constant)?;
    let sigma = report.sigma;
    let mut integral = KahanSum::default();
    let tol = 1e-8 * (1.0 + big_r);
    for i in 0..report.epsilons.len() - 1 {
        integral.add(layer_cake_cell(
            g,
            big_r,
            report.epsilons[i],
            report.epsilons[i + 1],
            report.measures[i],
            report.measures[i + 1],
            tol,
            0,
        )?);
    }
    // Tail below the grid, exact when m decays linearly in eps (the
    // simple-zero rate).
    integral.add(report.measures[0]);
    let integral = integral.value();

    // Direct quadrature with the integrand clipped at log(1/eps_min).
    let clip = -report.epsilons[0].ln();
    let n = scan_steps(SUP_SCAN, sigma, big_r);
    let dt = big_r / n as f64;
    let mut direct = KahanSum::default();
    for v in g.scan_values(0.5 * dt, dt, n) {
        direct.add((-v.abs().ln()).clamp(0.0, clip) * dt);
    }
    let integral_direct = direct.value();

    let s = constant * sigma * big_r;
    let bound = if s == 0.0 {
        big_r * constant.ln().max(0.0)
    } else {
        big_r * (s + 1.0) * constant.ln() + big_r * s
    };
    Ok(LogIntegralBound {
        integral,
        integral_direct,
        bound,
        effective_constant: if sigma > 0.0 { integral / (sigma * big_r * big_r) } else { 0.0 },
        pass: integral <= bound + 1e-9,
    })
}

/// `(1/R^2) int_0^R log(1/|g|)` for each radius — the sequence whose decay
/// to zero certifies that `g` is not flat at the origin scale.
pub fn log_integral_trend(
    g: &SliceFunction,
    radii: &[f64],
    constant: f64,
) -> Result<Vec<f64>> {
    radii
        .iter()
        .map(|r| {
            log_integral_bound_check(g, *r, constant)
                .map(|b| b.integral / (r * r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandlimited::BandlimitedFunction;
    use crate::convex::ConvexBody;
    use crate::random::{sample_direction, stream};
    use num_complex::Complex64;
    use rand::Rng;
    use std::f64::consts::PI;

    fn anchored_slice(seed: u64) -> SliceFunction {
        let spectrum = ConvexBody::ball(2, 1.0).unwrap();
        let f = BandlimitedFunction::synthesize(&spectrum, 8, true, true, seed).unwrap();
        let mut rng = stream(seed, 23);
        let theta = sample_direction(2, &mut rng);
        f.slice(&[0.0, 0.0], &theta).unwrap()
    }

    #[test]
    fn interval_unions_normalize() {
        let u = IntervalUnion::new(vec![(2.0, 3.0), (0.5, 1.5), (1.0, 2.2)]).unwrap();
        assert_eq!(u.intervals(), &[(0.5, 3.0)]);
        assert!((u.measure() - 2.5).abs() < 1e-15);
        assert!(IntervalUnion::new(vec![(1.0, 1.0)]).is_err());
        assert!(IntervalUnion::new(vec![(-0.5, 1.0)]).is_err());
        assert!(IntervalUnion::new(vec![]).is_err());
    }

    #[test]
    fn sublevel_measure_of_cosine() {
        let g = SliceFunction::cosine(1.0);
        // eps = 1 captures the whole interval.
        assert!((sublevel_measure(&g, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-9);
        // Closed form: m = (2/pi) asin(eps) per unit length.
        let eps = (PI / 12.0).sin();
        let m = sublevel_measure(&g, 1.0, eps).unwrap();
        assert!((m - 1.0 / 6.0).abs() < 1e-9, "measure {m}");
        for (eps, r) in [(0.3, 2.0), (0.04, 3.0)] {
            let m = sublevel_measure(&g, r, eps).unwrap();
            let exact = r * 2.0 / PI * (eps as f64).asin();
            assert!((m - exact).abs() < 1e-8, "eps {eps}, R {r}: {m} vs {exact}");
        }
    }

    #[test]
    fn sublevel_measure_is_monotone() {
        let g = anchored_slice(3);
        let mut last = 0.0;
        for k in 1..=10 {
            let eps = k as f64 / 10.0;
            let m = sublevel_measure(&g, 4.0, eps).unwrap();
            assert!(m >= last - 1e-10, "eps {eps}: {m} < {last}");
            last = m;
        }
        let mut last = 0.0;
        for r in [1.0, 2.0, 4.0, 8.0] {
            let m = sublevel_measure(&g, r, 0.2).unwrap();
            assert!(m >= last - 1e-10, "R {r}: {m} < {last}");
            last = m;
        }
    }

    #[test]
    fn sublevel_guards() {
        let zero = SliceFunction::from_terms(
            vec![1.0, -1.0],
            vec![Complex64::new(0.0, 0.0); 2],
        )
        .unwrap();
        assert!(matches!(
            sublevel_measure(&zero, 1.0, 0.5),
            Err(Error::DegenerateSlice { .. })
        ));
        let g = SliceFunction::cosine(1.0);
        assert!(sublevel_measure(&g, 1.0, 0.0).is_err());
        assert!(sublevel_measure(&g, -1.0, 0.5).is_err());
    }

    #[test]
    fn remez_trivial_when_the_set_is_everything() {
        let g = anchored_slice(5);
        let f_set = IntervalUnion::new(vec![(0.0, 2.0)]).unwrap();
        let report = remez_check(&g, 2.0, &f_set, 1.0).unwrap();
        assert!(report.pass, "sup {} vs log rhs {}", report.sup_all, report.log_rhs);
    }

    #[test]
    fn remez_cosine_straddling_a_zero() {
        let g = SliceFunction::cosine(1.0);
        let f_set = IntervalUnion::new(vec![(0.2, 0.3)]).unwrap();
        let report = remez_check(&g, 1.0, &f_set, 1.0).unwrap();
        let expected_sup = (0.4 * PI).cos();
        assert!(
            (report.sup_on_f - expected_sup).abs() < 1e-6,
            "sup_F {} vs {expected_sup}",
            report.sup_on_f
        );
        assert!(report.sup_all >= 1.0 && report.sup_all < 1.01);
        assert!(report.pass);
        assert_eq!(
            minimal_passing_constant(&g, 1.0, &f_set).unwrap(),
            Some(1.0)
        );
    }

    #[test]
    fn remez_suite_passes_at_the_default_constant() {
        for seed in 0..30 {
            let g = anchored_slice(seed);
            let mut rng = stream(seed, 29);
            for big_r in [1.0, 4.0] {
                let len = rng.random_range(0.05 * big_r..0.5 * big_r);
                let a = rng.random_range(0.0..big_r - len);
                let f_set = IntervalUnion::new(vec![(a, a + len)]).unwrap();
                let report =
                    remez_check(&g, big_r, &f_set, DEFAULT_REMEZ_CONSTANT).unwrap();
                assert!(
                    report.pass,
                    "seed {seed}, R {big_r}: sup {} vs log rhs {}",
                    report.sup_all, report.log_rhs
                );
                assert!(
                    report.variant_pass,
                    "seed {seed}, R {big_r}: final-form variant failed ({})",
                    report.log_variant_rhs
                );
            }
        }
    }

    #[test]
    fn remez_preconditions() {
        let g = SliceFunction::cosine(1.0);
        let f_set = IntervalUnion::new(vec![(0.0, 0.5)]).unwrap();
        // Set escaping [0, R).
        assert!(remez_check(&g, 0.25, &f_set, 8.0).is_err());
        // Center value too small: shift the cosine so g(0) = cos(pi/2) = 0.
        let shifted = SliceFunction::from_terms(
            vec![1.0, -1.0],
            vec![
                Complex64::new(0.0, 0.5),
                Complex64::new(0.0, -0.5),
            ],
        )
        .unwrap();
        // g(t) = Re(i e^{2pi i t}/... ) = -sin(2 pi t), so g(0) = 0.
        assert!(remez_check(&shifted, 1.0, &f_set, 8.0).is_err());
    }

    #[test]
    fn sublevel_decay_bound_for_cosine() {
        let g = SliceFunction::cosine(1.0);
        let report = sublevel_decay_check(&g, 1.0, DEFAULT_REMEZ_CONSTANT).unwrap();
        assert!(report.pass);
        // Analytic comparison on the same grid: (2/pi) asin(eps) <= 8 (8 eps)^{1/8}.
        for (eps, bound) in report.epsilons.iter().zip(&report.bounds) {
            let exact = 2.0 / PI * eps.asin();
            assert!(exact <= *bound + 1e-12, "eps {eps}");
        }
        // Simple zeros decay linearly in eps.
        let slope = report.fitted_exponent.unwrap();
        assert!((slope - 1.0).abs() < 0.2, "fitted exponent {slope}");
    }

    #[test]
    fn sublevel_decay_trivial_above_a_floor() {
        // |g| >= 0.4 on the line: measures vanish for eps below the floor.
        let g = SliceFunction::from_terms(
            vec![0.0, 1.0, -1.0],
            vec![
                Complex64::new(0.7, 0.0),
                Complex64::new(0.15, 0.0),
                Complex64::new(0.15, 0.0),
            ],
        )
        .unwrap();
        let report = sublevel_decay_check(&g, 4.0, DEFAULT_REMEZ_CONSTANT).unwrap();
        assert!(report.pass);
        for (eps, m) in report.epsilons.iter().zip(&report.measures) {
            if *eps < 0.39 {
                assert_eq!(*m, 0.0);
            }
        }
    }

    #[test]
    fn sublevel_decay_suite() {
        for seed in 0..25 {
            let g = anchored_slice(100 + seed);
            for big_r in [1.0, 4.0] {
                let report =
                    sublevel_decay_check(&g, big_r, DEFAULT_REMEZ_CONSTANT).unwrap();
                assert!(report.pass, "seed {seed}, R {big_r}");
            }
        }
    }

    #[test]
    fn log_integral_of_a_constant() {
        let g = SliceFunction::from_terms(vec![0.0], vec![Complex64::new(0.6, 0.0)]).unwrap();
        let check = log_integral_bound_check(&g, 2.0, DEFAULT_REMEZ_CONSTANT).unwrap();
        let exact = 2.0 * (1.0f64 / 0.6).ln();
        assert!(
            (check.integral - exact).abs() < 1e-3,
            "layer cake {} vs exact {exact}",
            check.integral
        );
        assert!((check.integral_direct - exact).abs() < 1e-6);
        assert!(check.pass);
    }

    #[test]
    fn log_integral_of_cosine_is_log_two_per_unit() {
        let g = SliceFunction::cosine(1.0);
        let big_r = 4.0;
        let check = log_integral_bound_check(&g, big_r, DEFAULT_REMEZ_CONSTANT).unwrap();
        let exact = big_r * (2.0f64).ln();
        assert!(
            (check.integral_direct - exact).abs() < 0.01 * exact,
            "direct {} vs exact {exact}",
            check.integral_direct
        );
        assert!(
            (check.integral - check.integral_direct).abs()
                < 0.01 * check.integral_direct,
            "layer cake {} vs direct {}",
            check.integral,
            check.integral_direct
        );
        assert!(check.pass);
    }

    #[test]
    fn layer_cake_agrees_with_direct_quadrature() {
        for seed in 0..10 {
            let g = anchored_slice(200 + seed);
            let check = log_integral_bound_check(&g, 4.0, DEFAULT_REMEZ_CONSTANT).unwrap();
            let scale = check.integral_direct.abs().max(0.05);
            assert!(
                (check.integral - check.integral_direct).abs() < 0.01 * scale + 1e-4,
                "seed {seed}: layer cake {} vs direct {}",
                check.integral,
                check.integral_direct
            );
            assert!(check.pass, "seed {seed}");
        }
    }

    #[test]
    fn normalized_log_integral_decreases_with_radius() {
        // cos: (1/R^2) * R log 2 = log(2)/R, strictly decreasing.
        let g = SliceFunction::cosine(1.0);
        let radii = [2.0, 4.0, 8.0, 16.0, 32.0];
        let trend = log_integral_trend(&g, &radii, DEFAULT_REMEZ_CONSTANT).unwrap();
        for w in trend.windows(2) {
            assert!(w[1] < w[0], "trend not decreasing: {trend:?}");
        }
        assert!((trend[0] - (2.0f64).ln() / 2.0).abs() < 0.01);
        // Random anchored slices share the trend.
        for seed in 0..5 {
            let g = anchored_slice(300 + seed);
            let trend = log_integral_trend(&g, &radii, DEFAULT_REMEZ_CONSTANT).unwrap();
            for w in trend.windows(2) {
                assert!(
                    w[1] < w[0] * 1.02 + 1e-6,
                    "seed {seed}: trend not decreasing: {trend:?}"
                );
            }
            assert!(trend[4] < 0.5 * trend[0] + 1e-6, "seed {seed}: {trend:?}");
        }
    }
}
