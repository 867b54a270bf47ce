//! Candidate sampling surfaces and their `(d-1)`-dimensional measure.
//!
//! A [`SurfaceSet`] carries the measure `H^{d-1}` restricted to the surface.
//! Two derived quantities drive certification:
//!
//! * the regularity profile `phi(r) = sup_x H^{d-1}(S ∩ B(x,r)) / (omega_{d-1} r^{d-1})`,
//!   whose small-`r` limit `phi(0)` enters the threshold (with `phi(0) >= 1`
//!   whenever the surface has positive measure), and
//! * the lower surface density
//!   `D⁻(S) = liminf_{R→∞} inf_x H^{d-1}(S ∩ B(x,R)) / (omega_d R^d)`,
//!   the quantity that must exceed the threshold.
//!
//! Both involve extrema over all centers and a limit in the radius; the
//! estimators here sample finite center sets (uniform plus adversarial) and
//! extrapolate over a finite radius grid, and every report states the
//! resulting bias direction: profile values are lower estimates of the true
//! supremum, density values are upper estimates of the true infimum.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    check_unit_direction, dist_sq, dot, sphere_measure, unit_ball_volume, KahanSum, Window,
};
use crate::random::stream;
use crate::stats::linear_fit;

/// Tolerance under which the regularity floor `phi(0) >= 1` is asserted for
/// sampled profiles.
pub const PHI_FLOOR_TOLERANCE: f64 = 0.02;

/// Largest number of hyperplanes a single measure query may enumerate;
/// guards against spacings that are microscopically small relative to the
/// queried radius.
const MAX_PLANES_PER_QUERY: i64 = 10_000_000;

/// Largest node count `discretize` will produce.
const MAX_DISCRETIZATION_NODES: usize = 5_000_000;

/// `offset + k * spacing`, well-defined for `k = 0` even at infinite spacing
/// (a single plane).
pub(crate) fn plane_constant(offset: f64, spacing: f64, k: i64) -> f64 {
    if k == 0 {
        offset
    } else {
        offset + k as f64 * spacing
    }
}

/// The shape payload of a [`SurfaceSet`].
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceShape {
    /// The family of parallel hyperplanes `{x : x·normal = offset + k*spacing}`
    /// for integer `k` outside `excluded`. `spacing` may be `f64::INFINITY`,
    /// leaving the single `k = 0` hyperplane.
    HyperplaneFamily {
        normal: Vec<f64>,
        spacing: f64,
        offset: f64,
        excluded: BTreeSet<i64>,
    },
    /// A finite union; members share the dimension and pairwise intersect in
    /// `H^{d-1}`-null sets (enforced at construction for hyperplane families
    /// by rejecting parallel normals).
    Union { members: Vec<SurfaceSet> },
    /// The sphere `{x : |x - center| = radius}`.
    SphereShell { center: Vec<f64>, radius: f64 },
    /// A discrete surrogate for a surface measure: point masses with a
    /// declared resolution scale. Ball queries below `3 * resolution` are
    /// refused rather than answered with quantization noise.
    WeightedPoints {
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
        resolution: f64,
    },
}

/// A candidate sampling surface with its `H^{d-1}` measure oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSet {
    dim: usize,
    shape: SurfaceShape,
}

/// Sampled regularity profile `phi(r)` on a grid of small radii.
#[derive(Debug, Clone)]
pub struct RegularityProfile {
    /// Admissible radii, ascending (sub-resolution radii of a discrete
    /// surrogate are dropped).
    pub radii: Vec<f64>,
    /// `phi(r_i)`: the sampled maximum of `measure / (omega_{d-1} r^{d-1})`.
    pub values: Vec<f64>,
    /// Extrapolated `phi(0)`: the maximum over the three smallest admissible
    /// radii. A lower estimate of the true supremum.
    pub phi0: f64,
    /// Centers evaluated per radius.
    pub budget: usize,
    /// True when no surface mass was seen at any sampled center — either the
    /// surface misses the window or the budget was far too small.
    pub empty: bool,
}

/// Outcome of the `phi(0) >= 1` floor check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloorStatus {
    Pass,
    Fail,
    /// The positive-measure hypothesis was not asserted, so the floor does
    /// not apply.
    Skipped,
}

#[derive(Debug, Clone)]
pub struct PhiFloorCheck {
    pub status: FloorStatus,
    pub phi0: f64,
    pub tolerance: f64,
}

/// Sampled lower-density report over a radius grid.
#[derive(Debug, Clone)]
pub struct DensityReport {
    pub radii: Vec<f64>,
    /// Per-radius sampled infima of `measure / (omega_d R^d)`.
    pub values: Vec<f64>,
    /// Tail extrapolation of the density (`D + c/R` fit over the largest
    /// radii). An upper estimate of the true lower density.
    pub density: f64,
    /// Fit residual plus the magnitude of the `c/R` correction at the largest
    /// radius; added to the certification uncertainty budget.
    pub uncertainty: f64,
    /// Centers evaluated per radius.
    pub budget: usize,
    /// Bias statement recorded alongside the numbers.
    pub note: String,
}

impl SurfaceSet {
    pub fn hyperplane_family(
        normal: Vec<f64>,
        spacing: f64,
        offset: f64,
        excluded: BTreeSet<i64>,
    ) -> Result<Self> {
        let dim = normal.len();
        check_unit_direction(&normal, dim)?;
        if !(spacing > 0.0) || spacing.is_nan() {
            return Err(Error::InvalidParameter(
                "hyperplane spacing must be positive".into(),
            ));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidParameter(
                "hyperplane offset must be finite".into(),
            ));
        }
        Ok(SurfaceSet {
            dim,
            shape: SurfaceShape::HyperplaneFamily {
                normal,
                spacing,
                offset,
                excluded,
            },
        })
    }

    /// A single hyperplane `{x : x·normal = offset}` (a family with infinite
    /// spacing).
    pub fn single_hyperplane(normal: Vec<f64>, offset: f64) -> Result<Self> {
        SurfaceSet::hyperplane_family(normal, f64::INFINITY, offset, BTreeSet::new())
    }

    pub fn sphere_shell(center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = center.len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension { dim, min: 1, max: usize::MAX });
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter("sphere radius must be positive".into()));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("sphere center must be finite".into()));
        }
        Ok(SurfaceSet { dim, shape: SurfaceShape::SphereShell { center, radius } })
    }

    /// A union of surfaces. Nested unions are flattened; members must share
    /// the dimension, be pairwise distinct, and hyperplane families must have
    /// pairwise non-parallel normals so that all pairwise intersections are
    /// `H^{d-1}`-null.
    pub fn union(members: Vec<SurfaceSet>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("union needs at least one member".into()));
        }
        let dim = members[0].dim;
        let mut flat: Vec<SurfaceSet> = Vec::with_capacity(members.len());
        for m in members {
            if m.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: m.dim });
            }
            match m.shape {
                SurfaceShape::Union { members } => flat.extend(members),
                _ => flat.push(m),
            }
        }
        for i in 0..flat.len() {
            for j in (i + 1)..flat.len() {
                if flat[i] == flat[j] {
                    return Err(Error::InvalidParameter(
                        "union members must be distinct".into(),
                    ));
                }
                if let (
                    SurfaceShape::HyperplaneFamily { normal: a, .. },
                    SurfaceShape::HyperplaneFamily { normal: b, .. },
                ) = (&flat[i].shape, &flat[j].shape)
                {
                    if dot(a, b).abs() > 1.0 - 1e-9 {
                        return Err(Error::InvalidParameter(
                            "union members with parallel normals can overlap; \
                             merge them into a single family"
                                .into(),
                        ));
                    }
                }
            }
        }
        Ok(SurfaceSet { dim, shape: SurfaceShape::Union { members: flat } })
    }

    pub fn weighted_points(
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
        resolution: f64,
    ) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "weighted point measure needs matching non-empty point and weight lists".into(),
            ));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension { dim, min: 1, max: usize::MAX });
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
            }
        }
        if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("weights must be non-negative".into()));
        }
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(Error::InvalidParameter("resolution scale must be positive".into()));
        }
        Ok(SurfaceSet {
            dim,
            shape: SurfaceShape::WeightedPoints { points, weights, resolution },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &SurfaceShape {
        &self.shape
    }

    /// `H^{d-1}(S ∩ B(x, r))`, closed form for analytic shapes, a weight sum
    /// for discrete surrogates.
    pub fn measure_in_ball(&self, x: &[f64], r: f64) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter("ball radius must be positive".into()));
        }
        match &self.shape {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                let d = self.dim;
                let slice_coeff = unit_ball_volume(d - 1);
                let power = (d as f64 - 1.0) / 2.0;
                let s = dot(x, normal) - offset;
                let k_lo = ((s - r) / spacing).ceil();
                let k_hi = ((s + r) / spacing).floor();
                if k_hi - k_lo > MAX_PLANES_PER_QUERY as f64 {
                    return Err(Error::InvalidParameter(format!(
                        "radius {r} spans more than {MAX_PLANES_PER_QUERY} hyperplanes \
                         at spacing {spacing}"
                    )));
                }
                let mut total = KahanSum::default();
                let (k_lo, k_hi) = (k_lo as i64, k_hi as i64);
                for k in k_lo..=k_hi {
                    if excluded.contains(&k) {
                        continue;
                    }
                    let t = s - plane_constant(0.0, *spacing, k);
                    if t.abs() <= r {
                        // (r^2 - t^2)^((d-1)/2); for d = 1 this is 0^0 = 1,
                        // the counting measure of the point.
                        total.add(slice_coeff * (r * r - t * t).max(0.0).powf(power));
                    }
                }
                Ok(total.value())
            }
            SurfaceShape::SphereShell { center, radius } => {
                Ok(shell_cap_measure(self.dim, center, *radius, x, r))
            }
            SurfaceShape::Union { members } => {
                let mut total = KahanSum::default();
                for m in members {
                    total.add(m.measure_in_ball(x, r)?);
                }
                Ok(total.value())
            }
            SurfaceShape::WeightedPoints { points, weights, resolution } => {
                let floor = 3.0 * resolution;
                if r < floor {
                    return Err(Error::SubResolutionQuery { radius: r, floor });
                }
                let r2 = r * r;
                let mut total = KahanSum::default();
                for (p, w) in points.iter().zip(weights) {
                    if dist_sq(p, x) <= r2 {
                        total.add(*w);
                    }
                }
                Ok(total.value())
            }
        }
    }

    /// Translates the surface by `v`.
    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let shape = match &self.shape {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                SurfaceShape::HyperplaneFamily {
                    normal: normal.clone(),
                    spacing: *spacing,
                    offset: offset + dot(v, normal),
                    excluded: excluded.clone(),
                }
            }
            SurfaceShape::SphereShell { center, radius } => SurfaceShape::SphereShell {
                center: center.iter().zip(v).map(|(c, s)| c + s).collect(),
                radius: *radius,
            },
            SurfaceShape::Union { members } => SurfaceShape::Union {
                members: members
                    .iter()
                    .map(|m| m.translate(v))
                    .collect::<Result<Vec<_>>>()?,
            },
            SurfaceShape::WeightedPoints { points, weights, resolution } => {
                SurfaceShape::WeightedPoints {
                    points: points
                        .iter()
                        .map(|p| p.iter().zip(v).map(|(a, s)| a + s).collect())
                        .collect(),
                    weights: weights.clone(),
                    resolution: *resolution,
                }
            }
        };
        Ok(SurfaceSet { dim: self.dim, shape })
    }

    /// Whether the surface carries positive measure near the window (checked
    /// on the circumscribed ball, so a surface just outside the box still
    /// counts). Backs the hypothesis of the `phi(0) >= 1` floor.
    pub fn has_positive_measure(&self, window: &Window) -> Result<bool> {
        if window.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: window.dim() });
        }
        let center = window.center();
        let r = window.circumradius();
        let mass = match &self.shape {
            // Bypass the resolution floor: this is an existence probe, not a
            // measure estimate.
            SurfaceShape::WeightedPoints { points, weights, .. } => {
                let r2 = r * r;
                points
                    .iter()
                    .zip(weights)
                    .filter(|(p, _)| dist_sq(p, &center) <= r2)
                    .map(|(_, w)| *w)
                    .sum()
            }
            _ => self.measure_in_ball(&center, r)?,
        };
        Ok(mass > 0.0)
    }

    /// Draws a point lying on the surface inside `window`, or `None` when
    /// the retry budget finds no admissible point (surface misses the
    /// window). Used for adversarial profile centers and for nodal-membership
    /// spot checks.
    pub fn sample_point_on<R: Rng>(&self, window: &Window, rng: &mut R) -> Option<Vec<f64>> {
        match &self.shape {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                // Range of plane constants c with the plane meeting the window.
                let (mut lo, mut hi) = (0.0, 0.0);
                for i in 0..self.dim {
                    let (a, b) = (normal[i] * window.lo()[i], normal[i] * window.hi()[i]);
                    lo += a.min(b);
                    hi += a.max(b);
                }
                let k_lo = ((lo - offset) / spacing).ceil() as i64;
                let k_hi = ((hi - offset) / spacing).floor() as i64;
                if k_hi < k_lo || (k_hi - k_lo) as u64 > 1_000_000 {
                    return None;
                }
                for _ in 0..64 {
                    let k = rng.random_range(k_lo..=k_hi);
                    if excluded.contains(&k) {
                        continue;
                    }
                    let c = plane_constant(*offset, *spacing, k);
                    if c < lo - 1e-12 || c > hi + 1e-12 {
                        continue;
                    }
                    let x = window.sample(rng);
                    let shift = c - dot(&x, normal);
                    let p: Vec<f64> =
                        x.iter().zip(normal).map(|(xi, ni)| xi + shift * ni).collect();
                    if window.contains(&p) {
                        return Some(p);
                    }
                }
                None
            }
            SurfaceShape::SphereShell { center, radius } => {
                for _ in 0..256 {
                    let u = crate::random::sample_direction(self.dim, rng);
                    let p: Vec<f64> =
                        center.iter().zip(&u).map(|(c, ui)| c + radius * ui).collect();
                    if window.contains(&p) {
                        return Some(p);
                    }
                }
                None
            }
            SurfaceShape::Union { members } => {
                for _ in 0..4 * members.len() {
                    let m = &members[rng.random_range(0..members.len())];
                    if let Some(p) = m.sample_point_on(window, rng) {
                        return Some(p);
                    }
                }
                None
            }
            SurfaceShape::WeightedPoints { points, weights, .. } => {
                for _ in 0..256 {
                    let i = rng.random_range(0..points.len());
                    if weights[i] > 0.0 && window.contains(&points[i]) {
                        return Some(points[i].clone());
                    }
                }
                None
            }
        }
    }

    /// Surfaces on which the density infimum is plausibly attained: for each
    /// hyperplane family, the family shifted by half a spacing (midpoints
    /// between planes) and, when planes are excluded, the phantom planes at
    /// the excluded indices.
    fn density_probe_loci(&self) -> Vec<SurfaceSet> {
        match &self.shape {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                let mut loci = Vec::new();
                if spacing.is_finite() {
                    loci.push(
                        SurfaceSet::hyperplane_family(
                            normal.clone(),
                            *spacing,
                            offset + spacing / 2.0,
                            BTreeSet::new(),
                        )
                        .expect("shifted family parameters stay valid"),
                    );
                }
                for &k in excluded {
                    let c = plane_constant(*offset, *spacing, k);
                    if c.is_finite() {
                        loci.push(
                            SurfaceSet::single_hyperplane(normal.clone(), c)
                                .expect("phantom plane parameters stay valid"),
                        );
                    }
                }
                loci
            }
            SurfaceShape::Union { members } => {
                members.iter().flat_map(|m| m.density_probe_loci()).collect()
            }
            _ => Vec::new(),
        }
    }

    fn sample_batch_on(
        loci: &[SurfaceSet],
        window: &Window,
        count: usize,
        rng: &mut impl Rng,
    ) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        if loci.is_empty() || count == 0 {
            return out;
        }
        let mut attempts = 0;
        while out.len() < count && attempts < 8 * count {
            let locus = &loci[attempts % loci.len()];
            if let Some(p) = locus.sample_point_on(window, rng) {
                out.push(p);
            }
            attempts += 1;
        }
        out
    }

    /// Samples the regularity profile `phi(r)` over `radii ⊂ (0,1)`.
    ///
    /// Centers mix uniform draws from `window` with adversarial draws on the
    /// surface itself (where small-ball ratios peak) and on the midpoint loci
    /// (where multi-sheet overlaps peak at larger `r`). The reported values
    /// are lower estimates of the true supremum.
    pub fn regularity_profile(
        &self,
        radii: &[f64],
        window: &Window,
        budget: usize,
        seed: u64,
    ) -> Result<RegularityProfile> {
        if window.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: window.dim() });
        }
        if radii.is_empty() || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(Error::InvalidParameter(
                "profile radii must lie strictly inside (0, 1)".into(),
            ));
        }
        if budget == 0 {
            return Err(Error::InvalidParameter("profile center budget must be positive".into()));
        }
        let mut sorted: Vec<f64> = radii.to_vec();
        sorted.sort_by(f64::total_cmp);
        sorted.dedup();

        let centers = self.profile_centers(window, budget, seed);
        let coeff = unit_ball_volume(self.dim - 1);
        let mut admissible = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        for &r in &sorted {
            let mut best: f64 = 0.0;
            let mut refused = false;
            for c in &centers {
                match self.measure_in_ball(c, r) {
                    Ok(m) => best = best.max(m / (coeff * r.powi(self.dim as i32 - 1))),
                    Err(Error::SubResolutionQuery { .. }) => {
                        refused = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !refused {
                admissible.push(r);
                values.push(best);
            }
        }
        if admissible.is_empty() {
            return Err(Error::InvalidParameter(
                "no admissible radii: all queries fall below the resolution floor".into(),
            ));
        }
        let phi0 = values
            .iter()
            .take(3)
            .fold(0.0_f64, |a, &v| a.max(v));
        let empty = values.iter().all(|v| *v == 0.0);
        Ok(RegularityProfile {
            radii: admissible,
            values,
            phi0,
            budget: centers.len(),
            empty,
        })
    }

    fn profile_centers(&self, window: &Window, budget: usize, seed: u64) -> Vec<Vec<f64>> {
        let n_uniform = budget.div_ceil(2);
        let n_on = budget.div_ceil(4);
        let n_mid = budget.saturating_sub(n_uniform + n_on);
        let mut centers = Vec::with_capacity(budget);
        let mut rng = stream(seed, 0);
        for _ in 0..n_uniform {
            centers.push(window.sample(&mut rng));
        }
        let mut rng = stream(seed, 1);
        centers.extend(Self::sample_batch_on(
            std::slice::from_ref(self),
            window,
            n_on,
            &mut rng,
        ));
        let mut rng = stream(seed, 2);
        let loci = self.density_probe_loci();
        centers.extend(Self::sample_batch_on(&loci, window, n_mid, &mut rng));
        centers
    }

    /// Estimates the lower surface density over an increasing radius grid
    /// spanning at least one decade, extrapolating the tail with a `D + c/R`
    /// fit over the top half of the grid.
    pub fn surface_density(
        &self,
        r_grid: &[f64],
        window: &Window,
        budget: usize,
        seed: u64,
    ) -> Result<DensityReport> {
        if window.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: window.dim() });
        }
        if r_grid.len() < 4
            || r_grid.windows(2).any(|w| w[1] <= w[0])
            || !(r_grid[0] > 0.0)
            || r_grid[r_grid.len() - 1] < 10.0 * r_grid[0]
        {
            return Err(Error::InvalidParameter(
                "density radius grid must be increasing, positive, and span a decade".into(),
            ));
        }
        if budget == 0 {
            return Err(Error::InvalidParameter("density center budget must be positive".into()));
        }
        let mut centers = Vec::with_capacity(budget + 1);
        centers.push(window.center());
        let n_uniform = budget / 2;
        let mut rng = stream(seed, 0);
        for _ in 0..n_uniform {
            centers.push(window.sample(&mut rng));
        }
        let mut rng = stream(seed, 1);
        let loci = self.density_probe_loci();
        centers.extend(Self::sample_batch_on(&loci, window, budget - n_uniform, &mut rng));

        let vol = unit_ball_volume(self.dim);
        let mut values = Vec::with_capacity(r_grid.len());
        for &r in r_grid {
            let mut worst = f64::INFINITY;
            for c in &centers {
                let m = self.measure_in_ball(c, r)?;
                worst = worst.min(m / (vol * r.powi(self.dim as i32)));
            }
            values.push(worst);
        }

        let tail = r_grid.len() / 2;
        let u: Vec<f64> = r_grid[tail..].iter().map(|r| 1.0 / r).collect();
        let y = &values[tail..];
        let (intercept, slope, rms) = linear_fit(&u, y);
        let density = intercept.max(0.0);
        let r_max = r_grid[r_grid.len() - 1];
        let uncertainty = rms + slope.abs() / r_max;
        let note = format!(
            "upper estimate of the lower density: infimum sampled over {} centers per \
             radius; tail model D + c/R fitted on R in [{}, {}]",
            centers.len(),
            r_grid[tail],
            r_max
        );
        Ok(DensityReport {
            radii: r_grid.to_vec(),
            values,
            density,
            uncertainty,
            budget: centers.len(),
            note,
        })
    }

    /// Builds a weighted-point surrogate of the surface restricted to
    /// `window`, with declared resolution `resolution`. The underlying grids
    /// are laid at pitch `resolution / 4` so quantization error at the trust
    /// radius `10 * resolution` stays within a couple percent.
    pub fn discretize(&self, window: &Window, resolution: f64) -> Result<SurfaceSet> {
        if window.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: window.dim() });
        }
        if !(resolution > 0.0) || !resolution.is_finite() {
            return Err(Error::InvalidParameter("resolution must be positive".into()));
        }
        let mut points = Vec::new();
        let mut weights = Vec::new();
        self.discretize_into(window, resolution / 4.0, &mut points, &mut weights)?;
        if points.is_empty() {
            return Err(Error::InvalidParameter(
                "surface does not meet the window; nothing to discretize".into(),
            ));
        }
        SurfaceSet::weighted_points(points, weights, resolution)
    }

    fn discretize_into(
        &self,
        window: &Window,
        pitch: f64,
        points: &mut Vec<Vec<f64>>,
        weights: &mut Vec<f64>,
    ) -> Result<()> {
        match &self.shape {
            SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
                let (mut lo, mut hi) = (0.0, 0.0);
                for i in 0..self.dim {
                    let (a, b) = (normal[i] * window.lo()[i], normal[i] * window.hi()[i]);
                    lo += a.min(b);
                    hi += a.max(b);
                }
                let k_lo = ((lo - offset) / spacing).ceil() as i64;
                let k_hi = ((hi - offset) / spacing).floor() as i64;
                if k_hi < k_lo {
                    return Ok(());
                }
                let basis = orthonormal_complement(normal);
                let half = window.circumradius();
                let steps = (half / pitch).ceil() as i64;
                let per_axis = 2 * steps + 1;
                let plane_nodes = (per_axis as f64).powi(self.dim as i32 - 1);
                let planes = (k_hi - k_lo + 1) as f64;
                if planes * plane_nodes > MAX_DISCRETIZATION_NODES as f64 {
                    return Err(Error::InvalidParameter(format!(
                        "discretization would need ~{:.1e} nodes; coarsen the resolution",
                        planes * plane_nodes
                    )));
                }
                let cell = pitch.powi(self.dim as i32 - 1);
                let center = window.center();
                for k in k_lo..=k_hi {
                    if excluded.contains(&k) {
                        continue;
                    }
                    let c = plane_constant(*offset, *spacing, k);
                    if c < lo - 1e-12 || c > hi + 1e-12 {
                        continue;
                    }
                    let shift = c - dot(&center, normal);
                    let p0: Vec<f64> =
                        center.iter().zip(normal).map(|(x, n)| x + shift * n).collect();
                    if self.dim == 1 {
                        if window.contains(&p0) {
                            points.push(p0);
                            weights.push(1.0);
                        }
                        continue;
                    }
                    // Walk the (d-1)-dimensional grid in mixed-radix order.
                    let axes = self.dim - 1;
                    let total = (per_axis as usize).pow(axes as u32);
                    for idx in 0..total {
                        let mut rem = idx;
                        let mut p = p0.clone();
                        for b in basis.iter().take(axes) {
                            let j = (rem % per_axis as usize) as i64 - steps;
                            rem /= per_axis as usize;
                            let t = j as f64 * pitch;
                            for (pi, bi) in p.iter_mut().zip(b) {
                                *pi += t * bi;
                            }
                        }
                        if window.contains(&p) {
                            points.push(p);
                            weights.push(cell);
                        }
                    }
                }
                Ok(())
            }
            SurfaceShape::SphereShell { center, radius } => match self.dim {
                1 => {
                    for s in [-1.0, 1.0] {
                        let p = vec![center[0] + s * radius];
                        if window.contains(&p) {
                            points.push(p);
                            weights.push(1.0);
                        }
                    }
                    Ok(())
                }
                2 => {
                    let m = ((std::f64::consts::TAU * radius / pitch).ceil() as usize).max(8);
                    let w = std::f64::consts::TAU * radius / m as f64;
                    for j in 0..m {
                        let a = (j as f64 + 0.5) * std::f64::consts::TAU / m as f64;
                        let p = vec![center[0] + radius * a.cos(), center[1] + radius * a.sin()];
                        if window.contains(&p) {
                            points.push(p);
                            weights.push(w);
                        }
                    }
                    Ok(())
                }
                3 => {
                    let bands = ((std::f64::consts::PI * radius / pitch).ceil() as usize).max(4);
                    for b in 0..bands {
                        let phi0 = b as f64 * std::f64::consts::PI / bands as f64;
                        let phi1 = (b + 1) as f64 * std::f64::consts::PI / bands as f64;
                        let phi = 0.5 * (phi0 + phi1);
                        let band_area = std::f64::consts::TAU
                            * radius
                            * radius
                            * (phi0.cos() - phi1.cos());
                        let m = ((std::f64::consts::TAU * radius * phi.sin() / pitch).ceil()
                            as usize)
                            .max(4);
                        let w = band_area / m as f64;
                        // Stagger longitudes between bands so points do not
                        // align along meridians.
                        let stagger = 0.5 * b as f64;
                        for j in 0..m {
                            let lam = (j as f64 + 0.5 + stagger) * std::f64::consts::TAU
                                / m as f64;
                            let p = vec![
                                center[0] + radius * phi.sin() * lam.cos(),
                                center[1] + radius * phi.sin() * lam.sin(),
                                center[2] + radius * phi.cos(),
                            ];
                            if window.contains(&p) {
                                points.push(p);
                                weights.push(w);
                            }
                        }
                    }
                    Ok(())
                }
                d => Err(Error::UnsupportedDimension { dim: d, min: 1, max: 3 }),
            },
            SurfaceShape::Union { members } => {
                for m in members {
                    m.discretize_into(window, pitch, points, weights)?;
                }
                Ok(())
            }
            SurfaceShape::WeightedPoints { .. } => Err(Error::InvalidParameter(
                "surface is already a discrete measure".into(),
            )),
        }
    }
}

/// `H^{d-1}` of the cap `S(center, rho) ∩ B(x, r)` in dimension `d`.
fn shell_cap_measure(d: usize, center: &[f64], rho: f64, x: &[f64], r: f64) -> f64 {
    if d == 1 {
        // The 0-sphere: two points with counting measure.
        return [-1.0, 1.0]
            .iter()
            .filter(|s| ((center[0] + *s * rho) - x[0]).abs() <= r)
            .count() as f64;
    }
    let full = sphere_measure(d) * rho.powi(d as i32 - 1);
    let dist = dist_sq(center, x).sqrt();
    if dist <= 1e-14 * rho.max(r) {
        return if rho <= r { full } else { 0.0 };
    }
    // Points c + rho*u lie in B(x, r) iff the angle t between u and (x - c)
    // satisfies cos t >= mu.
    let mu = (rho * rho + dist * dist - r * r) / (2.0 * rho * dist);
    if mu >= 1.0 {
        return 0.0;
    }
    if mu <= -1.0 {
        return full;
    }
    let alpha = mu.acos();
    match d {
        2 => 2.0 * rho * alpha,
        3 => std::f64::consts::TAU * rho * rho * (1.0 - alpha.cos()),
        4 => {
            std::f64::consts::TAU
                * rho.powi(3)
                * (alpha - alpha.sin() * alpha.cos())
        }
        _ => unreachable!("shell measures are provided for d <= 4"),
    }
}

/// An orthonormal basis of the hyperplane orthogonal to the unit vector `n`.
pub(crate) fn orthonormal_complement(n: &[f64]) -> Vec<Vec<f64>> {
    let d = n.len();
    let drop = (0..d)
        .max_by(|a, b| n[*a].abs().total_cmp(&n[*b].abs()))
        .unwrap();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for i in (0..d).filter(|i| *i != drop) {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        let a = dot(&v, n);
        for (vi, ni) in v.iter_mut().zip(n) {
            *vi -= a * ni;
        }
        for b in &basis {
            let a = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= a * bi;
            }
        }
        let len = crate::geometry::norm(&v);
        for vi in &mut v {
            *vi /= len;
        }
        basis.push(v);
    }
    basis
}

/// Checks the regularity floor: a surface of positive measure must satisfy
/// `phi(0) >= 1`. When the positive-measure hypothesis is not asserted the
/// check is skipped; a failure on an asserted-positive surface means the
/// construction is inconsistent or the profile is badly under-sampled.
pub fn check_phi0_floor(profile: &RegularityProfile, positive_measure: bool) -> PhiFloorCheck {
    if !positive_measure {
        return PhiFloorCheck {
            status: FloorStatus::Skipped,
            phi0: profile.phi0,
            tolerance: PHI_FLOOR_TOLERANCE,
        };
    }
    let status = if profile.phi0 >= 1.0 - PHI_FLOOR_TOLERANCE {
        FloorStatus::Pass
    } else {
        FloorStatus::Fail
    };
    PhiFloorCheck { status, phi0: profile.phi0, tolerance: PHI_FLOOR_TOLERANCE }
}
