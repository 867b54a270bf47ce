//! Monte Carlo integral geometry: line processes, the Crofton area
//! estimator, and the weighted line-integration identity.
//!
//! The Crofton formula recovers the `(d-1)`-measure of a rectifiable set `E`
//! from its intersection counts with lines:
//!
//! ```text
//! H^{d-1}(E) = (1 / (2 omega_{d-1})) * int int card(E ∩ l_{y,theta})
//!              dm_{d-1}(y) dH^{d-1}(theta),
//! ```
//!
//! where `l_{y,theta}` runs through `y` in direction `theta` and the foot `y`
//! ranges over the hyperplane `theta⊥`. Restricting feet to the disk of
//! radius `R` in `theta⊥` gives a sampling window of kinematic mass
//! `(d omega_d) * (omega_{d-1} R^{d-1})` that captures every line meeting
//! `B(0, R)`; for `E ⊂ B(0, R)` the estimator is unbiased.
//!
//! The companion identity converts such double integrals into a single
//! weighted volume integral:
//!
//! ```text
//! int int g(y) dm_{d-1}(y) dH^{d-1}(theta)
//!     = (d-1) omega_{d-1} * int g(y) / |y| dm_d(y),
//! ```
//!
//! which this module estimates from both sides as a cross-check.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, sphere_measure, unit_ball_volume};
use crate::parallel::chunked_map;
use crate::random::{sample_direction, sample_point_in_ball, stream};
use crate::stats::RunningStats;
use crate::surface::{orthonormal_complement, plane_constant, SurfaceSet, SurfaceShape};

/// A line `{foot + t * direction}` in `R^d`, stored through its direction
/// and the foot point closest to the origin (`foot · direction = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    direction: Vec<f64>,
    foot: Vec<f64>,
}

impl Line {
    /// Builds a line from a unit direction and a foot point; the foot must
    /// already be orthogonal to the direction within `1e-10`.
    pub fn new(direction: Vec<f64>, foot: Vec<f64>) -> Result<Self> {
        crate::geometry::check_unit_direction(&direction, direction.len())?;
        if foot.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: direction.len(),
                got: foot.len(),
            });
        }
        let along = dot(&foot, &direction);
        if along.abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "line foot has component {along:.3e} along the direction; \
                 use Line::through to reproject"
            )));
        }
        Ok(Line { direction, foot })
    }

    /// The line through `point` with direction `direction`; the foot is the
    /// projection of `point` onto `direction⊥`.
    pub fn through(point: &[f64], direction: Vec<f64>) -> Result<Self> {
        crate::geometry::check_unit_direction(&direction, direction.len())?;
        if point.len() != direction.len() {
            return Err(Error::DimensionMismatch {
                expected: direction.len(),
                got: point.len(),
            });
        }
        let along = dot(point, &direction);
        let foot = point
            .iter()
            .zip(&direction)
            .map(|(p, t)| p - along * t)
            .collect();
        Ok(Line { direction, foot })
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// The closest point of the line to the origin.
    pub fn foot(&self) -> &[f64] {
        &self.foot
    }

    /// The point `foot + t * direction`.
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        self.foot
            .iter()
            .zip(&self.direction)
            .map(|(y, d)| y + t * d)
            .collect()
    }

    /// Distance from the origin (the foot norm).
    pub fn distance_to_origin(&self) -> f64 {
        norm(&self.foot)
    }
}

/// Intersection count of a line with a surface; `Infinite` flags a line that
/// lies inside the surface (it is discarded and tallied by the estimators).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineCount {
    Finite(u64),
    Infinite,
}

/// A Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Result of a Crofton surface-area estimate.
#[derive(Debug, Clone, Copy)]
pub struct CroftonEstimate {
    pub value: f64,
    pub stderr: f64,
    /// Lines whose counts entered the mean.
    pub lines: u64,
    /// Lines discarded for lying inside the surface.
    pub discarded: u64,
    /// Set when more than 0.1% of lines were discarded — the estimate is
    /// then untrustworthy (the surface contains a positive-measure line
    /// bundle, violating the rectifiability assumptions).
    pub discard_warning: bool,
}

fn check_line_dimension(d: usize) -> Result<()> {
    if !(2..=4).contains(&d) {
        return Err(Error::UnsupportedDimension { dim: d, min: 2, max: 4 });
    }
    Ok(())
}

/// Total kinematic mass of the window of lines meeting `B(0, R)`:
/// `(d omega_d) * (omega_{d-1} R^{d-1})`.
pub fn kinematic_mass(d: usize, radius: f64) -> f64 {
    sphere_measure(d) * unit_ball_volume(d - 1) * radius.powi(d as i32 - 1)
}

/// Draws one line from the kinematic measure restricted to lines meeting
/// `B(0, radius)`: direction uniform on the sphere, foot uniform on the
/// `(d-1)`-ball of radius `radius` inside `direction⊥`.
pub fn sample_line_hitting_ball<R: Rng>(d: usize, radius: f64, rng: &mut R) -> Line {
    let direction = sample_direction(d, rng);
    let basis = orthonormal_complement(&direction);
    let coords = sample_point_in_ball(d - 1, radius, rng);
    let mut foot = vec![0.0; d];
    for (c, b) in coords.iter().zip(&basis) {
        for (f, bi) in foot.iter_mut().zip(b) {
            *f += c * bi;
        }
    }
    Line { direction, foot }
}

/// A deterministic batch of lines meeting `B(0, radius)`.
pub fn sample_lines_hitting_ball(
    d: usize,
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<Line>> {
    check_line_dimension(d)?;
    if !(radius > 0.0) || n == 0 {
        return Err(Error::InvalidParameter(
            "line sampling needs a positive radius and at least one line".into(),
        ));
    }
    let mut rng = stream(seed, 0);
    Ok((0..n)
        .map(|_| sample_line_hitting_ball(d, radius, &mut rng))
        .collect())
}

/// Crofton estimate of `H^{d-1}(E)` for a set `E ⊂ B(0, radius)`, given an
/// exact per-line intersection counter.
///
/// Lines reporting `Infinite` (lying inside `E`) are discarded and tallied;
/// a discard fraction above 0.1% raises `discard_warning`.
pub fn crofton_area<F>(
    counter: F,
    d: usize,
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<CroftonEstimate>
where
    F: Fn(&Line) -> LineCount + Sync,
{
    check_line_dimension(d)?;
    if !(radius > 0.0) || n == 0 {
        return Err(Error::InvalidParameter(
            "Crofton estimation needs a positive radius and at least one line".into(),
        ));
    }
    let chunks = chunked_map(n, |stream_idx, range| {
        let mut rng = stream(seed, stream_idx);
        let mut stats = RunningStats::default();
        let mut discarded = 0u64;
        for _ in range {
            let line = sample_line_hitting_ball(d, radius, &mut rng);
            match counter(&line) {
                LineCount::Finite(c) => stats.push(c as f64),
                LineCount::Infinite => discarded += 1,
            }
        }
        (stats, discarded)
    });
    let mut stats = RunningStats::default();
    let mut discarded = 0u64;
    for (s, disc) in chunks {
        stats.merge(&s);
        discarded += disc;
    }
    if stats.count() == 0 {
        return Err(Error::InvalidParameter(
            "every sampled line was discarded; the counter never returned a finite count".into(),
        ));
    }
    let scale = kinematic_mass(d, radius) / (2.0 * unit_ball_volume(d - 1));
    let frac = discarded as f64 / n as f64;
    Ok(CroftonEstimate {
        value: scale * stats.mean(),
        stderr: scale * stats.stderr(),
        lines: stats.count(),
        discarded,
        discard_warning: frac > 1e-3,
    })
}

/// Estimates both sides of the weighted line-integration identity for a
/// non-negative `g` supported in `B(0, radius)`:
///
/// * left: foot-point sampling of
///   `int_{S^{d-1}} int_{theta⊥} g dm_{d-1} dH^{d-1}`,
/// * right: `(d-1) omega_{d-1} int g(y)/|y| dm_d(y)`, importance-sampled
///   with radial density proportional to `1/|y|` so the integrable
///   singularity at the origin never appears in the summands.
///
/// Both estimators reduce to `(d omega_d omega_{d-1} R^{d-1}) * mean(g)`
/// under their respective sampling laws, and are returned separately for
/// cross-checking.
pub fn weighted_line_integral<G>(
    g: G,
    d: usize,
    radius: f64,
    n: usize,
    seed: u64,
) -> Result<(MonteCarloEstimate, MonteCarloEstimate)>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    check_line_dimension(d)?;
    if !(radius > 0.0) || n == 0 {
        return Err(Error::InvalidParameter(
            "the integration identity needs a positive radius and samples".into(),
        ));
    }
    let mass = kinematic_mass(d, radius);

    let lhs_chunks = chunked_map(n, |stream_idx, range| {
        let mut rng = stream(seed, 2 * stream_idx);
        let mut stats = RunningStats::default();
        for _ in range {
            let line = sample_line_hitting_ball(d, radius, &mut rng);
            stats.push(g(line.foot()));
        }
        stats
    });
    let rhs_chunks = chunked_map(n, |stream_idx, range| {
        let mut rng = stream(seed, 2 * stream_idx + 1);
        let mut stats = RunningStats::default();
        let power = 1.0 / (d as f64 - 1.0);
        for _ in range {
            // Radial density ∝ r^{d-2} cancels the 1/|y| weight against the
            // volume element r^{d-1} dr.
            let r = radius * rng.random::<f64>().powf(power);
            let u = sample_direction(d, &mut rng);
            let y: Vec<f64> = u.iter().map(|ui| r * ui).collect();
            stats.push(g(&y));
        }
        stats
    });

    let mut lhs = RunningStats::default();
    for s in lhs_chunks {
        lhs.merge(&s);
    }
    let mut rhs = RunningStats::default();
    for s in rhs_chunks {
        rhs.merge(&s);
    }
    Ok((
        MonteCarloEstimate {
            value: mass * lhs.mean(),
            stderr: mass * lhs.stderr(),
            samples: lhs.count(),
        },
        MonteCarloEstimate {
            value: mass * rhs.mean(),
            stderr: mass * rhs.stderr(),
            samples: rhs.count(),
        },
    ))
}

impl SurfaceSet {
    /// Exact count of intersection points of `line` with the surface clipped
    /// to `B(0, clip_radius)`.
    ///
    /// Conventions (fixed so that measure-zero events are deterministic):
    /// a line parallel to a hyperplane counts 0 unless it lies inside the
    /// plane, which reports `Infinite`; a line tangent to a sphere counts 1.
    pub fn line_intersection_count(&self, line: &Line, clip_radius: f64) -> Result<LineCount> {
        if line.direction().len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: line.direction().len(),
            });
        }
        if !(clip_radius > 0.0) {
            return Err(Error::InvalidParameter("clip radius must be positive".into()));
        }
        let y2 = dot(line.foot(), line.foot());
        let r2 = clip_radius * clip_radius;
        if y2 > r2 {
            return Ok(LineCount::Finite(0));
        }
        match self.shape() {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                let a = dot(line.direction(), normal);
                let b = dot(line.foot(), normal);
                if a.abs() < 1e-12 {
                    // Parallel: inside one of the planes, or missing all.
                    let k = if spacing.is_finite() {
                        ((b - offset) / spacing).round() as i64
                    } else {
                        0
                    };
                    let on_plane = (b - plane_constant(*offset, *spacing, k)).abs() <= 1e-12
                        && !excluded.contains(&k);
                    return Ok(if on_plane { LineCount::Infinite } else { LineCount::Finite(0) });
                }
                // Within the ball the line parameter spans [-l, l].
                let l = (r2 - y2).max(0.0).sqrt();
                let c_lo = b - l * a.abs();
                let c_hi = b + l * a.abs();
                let k_lo = ((c_lo - offset) / spacing).ceil() as i64;
                let k_hi = ((c_hi - offset) / spacing).floor() as i64;
                let mut count = 0u64;
                for k in k_lo..=k_hi {
                    if excluded.contains(&k) {
                        continue;
                    }
                    let t = (plane_constant(*offset, *spacing, k) - b) / a;
                    if y2 + t * t <= r2 {
                        count += 1;
                    }
                }
                Ok(LineCount::Finite(count))
            }
            SurfaceShape::SphereShell { center, radius } => {
                let diff: Vec<f64> =
                    center.iter().zip(line.foot()).map(|(c, y)| c - y).collect();
                let beta = dot(&diff, line.direction());
                let q = dot(&diff, &diff);
                let disc = beta * beta - q + radius * radius;
                let tol = 1e-12 * (radius * radius + q);
                let inside = |t: f64| y2 + t * t <= r2;
                if disc < -tol {
                    Ok(LineCount::Finite(0))
                } else if disc <= tol {
                    // Tangency counts once.
                    Ok(LineCount::Finite(u64::from(inside(beta))))
                } else {
                    let s = disc.sqrt();
                    let count = u64::from(inside(beta - s)) + u64::from(inside(beta + s));
                    Ok(LineCount::Finite(count))
                }
            }
            SurfaceShape::Union { members } => {
                let mut total = 0u64;
                for m in members {
                    match m.line_intersection_count(line, clip_radius)? {
                        LineCount::Finite(c) => total += c,
                        LineCount::Infinite => return Ok(LineCount::Infinite),
                    }
                }
                Ok(LineCount::Finite(total))
            }
            SurfaceShape::WeightedPoints { .. } => Err(Error::InvalidParameter(
                "discrete point measures have no line-intersection counter".into(),
            )),
        }
    }
}
