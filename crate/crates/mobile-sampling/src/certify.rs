//! Assembles the certification verdict: a surface whose lower density
//! exceeds `phi(0) * A_d * W(K)` is a mobile sampling set for every
//! Paley-Wiener class over the spectrum `K`. The verdict composes the
//! sampled density, the regularity profile, the mean width, and the
//! dimensional constant, with their uncertainty estimates summed into an
//! inconclusive band. Also houses the empirical sampling-ratio harness and
//! the sinc-lattice worked example.

use crate::bandlimited::{BandlimitedFunction, SincProduct};
use crate::convex::{ConvexBody, Shape};
use crate::error::{Error, Result};
use crate::geometry::{certification_constant, unit_ball_volume, KahanSum, Window};
use crate::parallel::chunked_map;
use crate::quadrature::SphereQuadrature;
use crate::random::stream;
use crate::surface::{check_phi0_floor, FloorStatus, SurfaceSet, SurfaceShape};

/// Sentence required on every report: the theorem gives a sufficient
/// condition only.
pub const SUFFICIENCY_NOTE: &str = "a NOT-CERTIFIED verdict does not assert failure of \
     mobile sampling: the density condition is sufficient, not necessary, and no \
     density-only characterization exists";

/// Relative slack granted to the sampled regularity profile (it is a lower
/// estimate of a supremum over all centers).
const PHI_RELATIVE_SLACK: f64 = 0.01;

/// Monte Carlo and quadrature budgets for [`certify`].
#[derive(Debug, Clone)]
pub struct CertifyBudgets {
    /// Half-side of the cube from which estimation centers are drawn.
    pub window_half: f64,
    /// Increasing density radii; must span at least a decade.
    pub density_radii: Vec<f64>,
    /// Centers per density radius.
    pub density_centers: usize,
    /// Small radii for the regularity profile, inside (0, 1).
    pub profile_radii: Vec<f64>,
    /// Centers per profile radius.
    pub profile_centers: usize,
    /// Sphere-quadrature refinement for the mean width (`None` = default).
    pub quadrature_level: Option<usize>,
}

impl Default for CertifyBudgets {
    fn default() -> Self {
        CertifyBudgets {
            window_half: 5.0,
            density_radii: (0..8).map(|i| 5.0 * 10f64.powf(i as f64 / 7.0)).collect(),
            density_centers: 48,
            profile_radii: vec![0.02, 0.03, 0.05, 0.08, 0.12, 0.2, 0.3, 0.45],
            profile_centers: 96,
            quadrature_level: None,
        }
    }
}

impl CertifyBudgets {
    /// Scales the Monte Carlo center counts by `factor` (floored at 4).
    pub fn scaled(mut self, factor: f64) -> Self {
        let scale = |n: usize| (((n as f64) * factor).round() as usize).max(4);
        self.density_centers = scale(self.density_centers);
        self.profile_centers = scale(self.profile_centers);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::NotCertified => "NOT-CERTIFIED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Everything that entered the verdict, with bias directions and budgets.
#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub surface_id: String,
    pub spectrum_id: String,
    pub dim: usize,
    /// Sampled lower density (an upper estimate of the true liminf).
    pub density: f64,
    pub density_uncertainty: f64,
    pub density_budget: usize,
    /// Regularity value used in the threshold (raw estimate floored at 1).
    pub phi0: f64,
    /// Raw sampled profile value before the floor.
    pub phi0_raw: f64,
    pub floor_status: FloorStatus,
    pub mean_width: f64,
    pub mean_width_uncertainty: f64,
    pub dimensional_constant: f64,
    /// `phi(0) * A_d * W(K)`.
    pub threshold: f64,
    /// `density - threshold`.
    pub margin: f64,
    /// Sum of the component uncertainty estimates; the inconclusive band.
    pub uncertainty: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

fn vec_label(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn spectrum_label(k: &ConvexBody) -> String {
    match k.shape() {
        Shape::Ball { radius } => format!("ball(r={radius}, d={})", k.dim()),
        Shape::AxisBox { half_widths } => format!("box(half_widths={})", vec_label(half_widths)),
        Shape::Ellipsoid { semi_axes } => format!("ellipsoid({})", vec_label(semi_axes)),
        Shape::Polytope { vertices, .. } => {
            format!("polytope({} vertices, d={})", vertices.len(), k.dim())
        }
        Shape::Inflated { base, kappa } => {
            format!("{} + ball(r={kappa})", spectrum_label(base))
        }
    }
}

pub fn surface_label(s: &SurfaceSet) -> String {
    match s.shape() {
        SurfaceShape::HyperplaneFamily { normal, spacing, offset, excluded } => {
            if spacing.is_infinite() {
                format!("hyperplane(normal={}, offset={offset})", vec_label(normal))
            } else {
                let excl = if excluded.is_empty() {
                    String::new()
                } else {
                    format!(", excluded={excluded:?}")
                };
                format!(
                    "hyperplane-family(normal={}, spacing={spacing}, offset={offset}{excl})",
                    vec_label(normal)
                )
            }
        }
        SurfaceShape::Union { members } => {
            let parts: Vec<String> = members.iter().map(surface_label).collect();
            format!("union({})", parts.join(" | "))
        }
        SurfaceShape::SphereShell { center, radius } => {
            format!("sphere-shell(center={}, r={radius})", vec_label(center))
        }
        SurfaceShape::WeightedPoints { points, resolution, .. } => {
            format!("weighted-points({} nodes, resolution={resolution})", points.len())
        }
    }
}

/// Regularity of a union is taken member-wise: transverse intersections are
/// lower-dimensional, so pruning arbitrarily small neighborhoods of them
/// restores each member's own profile while reducing the density by an
/// arbitrarily small amount. Returns `(raw phi0, floor status, note)`.
fn pruned_phi0(
    surface: &SurfaceSet,
    window: &Window,
    budgets: &CertifyBudgets,
    seed: u64,
) -> Result<(f64, FloorStatus, Option<String>)> {
    match surface.shape() {
        SurfaceShape::Union { members } => {
            let mut worst = 0.0_f64;
            let mut status = FloorStatus::Pass;
            for (i, member) in members.iter().enumerate() {
                let profile = member.regularity_profile(
                    &budgets.profile_radii,
                    window,
                    budgets.profile_centers,
                    seed ^ (0x51ed_2709_u64).wrapping_mul(i as u64 + 1),
                )?;
                let check = check_phi0_floor(&profile, !profile.empty);
                if check.status == FloorStatus::Fail {
                    status = FloorStatus::Fail;
                }
                worst = worst.max(profile.phi0);
            }
            Ok((
                worst,
                status,
                Some(
                    "regularity taken member-wise: transverse crossings are prunable \
                     (lower-dimensional), so the union certifies with the members' \
                     profile at an arbitrarily small density concession"
                        .into(),
                ),
            ))
        }
        _ => {
            let profile = surface.regularity_profile(
                &budgets.profile_radii,
                window,
                budgets.profile_centers,
                seed,
            )?;
            let check = check_phi0_floor(&profile, !profile.empty);
            Ok((profile.phi0, check.status, None))
        }
    }
}

/// Runs the full certification pipeline. Estimation failures downgrade the
/// verdict to INCONCLUSIVE with the failure recorded in the notes;
/// precondition violations (dimension mismatches, bad budgets) are errors.
pub fn certify(
    surface: &SurfaceSet,
    spectrum: &ConvexBody,
    budgets: &CertifyBudgets,
    seed: u64,
) -> Result<CertificationReport> {
    let dim = surface.dim();
    if spectrum.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: spectrum.dim() });
    }
    let window = Window::centered_cube(dim, budgets.window_half)?;
    let a_d = certification_constant(dim)?;

    let base_level = match budgets.quadrature_level {
        Some(level) => level,
        None => SphereQuadrature::default_for(dim)?.level(),
    };
    let coarse = spectrum.mean_width(&SphereQuadrature::build(dim, base_level)?)?;
    let refined_level = (2 * base_level).min(match dim {
        2 => 1024,
        3 => 64,
        _ => 8,
    });
    let mean_width = spectrum.mean_width(&SphereQuadrature::build(dim, refined_level)?)?;
    let mean_width_uncertainty = (mean_width - coarse).abs() + 1e-9;

    let mut notes = Vec::new();
    let mut report = CertificationReport {
        surface_id: surface_label(surface),
        spectrum_id: spectrum_label(spectrum),
        dim,
        density: f64::NAN,
        density_uncertainty: f64::NAN,
        density_budget: 0,
        phi0: f64::NAN,
        phi0_raw: f64::NAN,
        floor_status: FloorStatus::Skipped,
        mean_width,
        mean_width_uncertainty,
        dimensional_constant: a_d,
        threshold: f64::NAN,
        margin: f64::NAN,
        uncertainty: f64::NAN,
        verdict: Verdict::Inconclusive,
        notes: Vec::new(),
    };

    if !surface.has_positive_measure(&window)? {
        let threshold = a_d * mean_width;
        report.density = 0.0;
        report.density_uncertainty = 0.0;
        report.phi0 = 1.0;
        report.phi0_raw = f64::NAN;
        report.threshold = threshold;
        report.margin = -threshold;
        report.uncertainty = 0.0;
        report.verdict = Verdict::NotCertified;
        report.notes = vec![
            "surface carries no measure in the sampling window, so the lower density \
             is zero and the condition cannot hold"
                .into(),
            SUFFICIENCY_NOTE.into(),
        ];
        return Ok(report);
    }

    let density = match surface.surface_density(
        &budgets.density_radii,
        &window,
        budgets.density_centers,
        seed,
    ) {
        Ok(d) => d,
        Err(e) => {
            report.notes = vec![format!("density estimation failed: {e}"), SUFFICIENCY_NOTE.into()];
            return Ok(report);
        }
    };
    notes.push(density.note.clone());

    let (phi0_raw, floor_status, prune_note) =
        match pruned_phi0(surface, &window, budgets, seed.wrapping_add(1)) {
            Ok(p) => p,
            Err(e) => {
                report.density = density.density;
                report.density_uncertainty = density.uncertainty;
                report.density_budget = density.budget;
                report.notes =
                    vec![format!("regularity profile failed: {e}"), SUFFICIENCY_NOTE.into()];
                return Ok(report);
            }
        };
    if let Some(n) = prune_note {
        notes.push(n);
    }
    if floor_status == FloorStatus::Fail {
        notes.push(
            "profile floor check failed (phi(0) < 1 - tol): the profile is \
             under-sampled; verdict kept conservative via the floor"
                .into(),
        );
    }

    // The sampled profile under-estimates the supremum; positive-measure
    // surfaces satisfy phi(0) >= 1, so the floor is a sound correction.
    let phi0 = phi0_raw.max(1.0);
    let phi_uncertainty = (phi0 - phi0_raw).abs() + PHI_RELATIVE_SLACK * phi0;

    let threshold = phi0 * a_d * mean_width;
    let margin = density.density - threshold;
    let uncertainty = density.uncertainty
        + phi_uncertainty * a_d * mean_width
        + phi0 * a_d * mean_width_uncertainty;
    let verdict = if margin > uncertainty {
        Verdict::Certified
    } else if margin < -uncertainty {
        Verdict::NotCertified
    } else {
        Verdict::Inconclusive
    };
    notes.push(SUFFICIENCY_NOTE.into());

    report.density = density.density;
    report.density_uncertainty = density.uncertainty;
    report.density_budget = density.budget;
    report.phi0 = phi0;
    report.phi0_raw = phi0_raw;
    report.floor_status = floor_status;
    report.threshold = threshold;
    report.margin = margin;
    report.uncertainty = uncertainty;
    report.verdict = verdict;
    report.notes = notes;
    Ok(report)
}

/// Empirical sampling-ratio study over a synthesized corpus.
#[derive(Debug, Clone)]
pub struct SamplingRatioReport {
    /// Norm exponent; `f64::INFINITY` for the sup-norm case.
    pub p: f64,
    pub ratios: Vec<f64>,
    pub min: f64,
    pub lower_quartile: f64,
    pub median: f64,
    pub upper_quartile: f64,
    pub corpus: usize,
    pub note: String,
}

struct RatioHarness {
    gamma_points: Vec<Vec<f64>>,
    gamma_weights: Vec<f64>,
    grid_points: Vec<Vec<f64>>,
    cell_volume: f64,
}

impl RatioHarness {
    fn build(surface: &SurfaceSet, spectrum: &ConvexBody, window: &Window) -> Result<Option<Self>> {
        let dim = surface.dim();
        if !surface.has_positive_measure(window)? {
            return Ok(None);
        }
        // Resolution: fine enough for both the surface quadrature and the
        // band-limited integrands (a few nodes per shortest wavelength).
        let sigma = crate::geometry::norm(&spectrum.bounding_half_widths());
        let per_axis: usize = match dim {
            1 | 2 | 3 => 64,
            _ => 24,
        };
        let resolution = (window.min_side() / per_axis as f64).min(1.0 / (8.0 * sigma.max(0.125)));
        let discretized = surface.discretize(window, resolution)?;
        let (gamma_points, gamma_weights) = match discretized.shape() {
            SurfaceShape::WeightedPoints { points, weights, .. } => {
                (points.clone(), weights.clone())
            }
            _ => unreachable!("discretize always produces weighted points"),
        };

        let n_axis: Vec<usize> = (0..dim)
            .map(|i| ((window.side(i) / resolution).ceil() as usize).max(2))
            .collect();
        let mut grid_points = Vec::new();
        let mut idx = vec![0usize; dim];
        loop {
            let p: Vec<f64> = (0..dim)
                .map(|i| {
                    window.lo()[i] + window.side(i) * (idx[i] as f64 + 0.5) / n_axis[i] as f64
                })
                .collect();
            grid_points.push(p);
            let mut axis = 0;
            loop {
                if axis == dim {
                    return Ok(Some(RatioHarness {
                        gamma_points,
                        gamma_weights,
                        cell_volume: (0..dim)
                            .map(|i| window.side(i) / n_axis[i] as f64)
                            .product(),
                        grid_points,
                    }));
                }
                idx[axis] += 1;
                if idx[axis] < n_axis[axis] {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }

    fn ratio(&self, f: &BandlimitedFunction, p: f64) -> f64 {
        if p.is_infinite() {
            let sup_gamma = self
                .gamma_points
                .iter()
                .fold(0.0_f64, |a, x| a.max(f.value_re(x).abs()));
            // The window sup includes the surface nodes, so the ratio can
            // never exceed 1 by discretization accident.
            let sup_window = self
                .grid_points
                .iter()
                .fold(sup_gamma, |a, x| a.max(f.value_re(x).abs()));
            return if sup_window > 0.0 { sup_gamma / sup_window } else { 0.0 };
        }
        let mut num = KahanSum::default();
        for (x, w) in self.gamma_points.iter().zip(&self.gamma_weights) {
            num.add(w * f.value_re(x).abs().powf(p));
        }
        let mut den = KahanSum::default();
        for x in &self.grid_points {
            den.add(f.value_re(x).abs().powf(p));
        }
        let den = den.value() * self.cell_volume;
        if den > 0.0 {
            (num.value() / den).powf(1.0 / p)
        } else {
            0.0
        }
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let idx = ((sorted.len() - 1) as f64 * q).round() as usize;
    sorted[idx]
}

/// Computes windowed norm ratios `‖f‖_{L^p(Γ∩W)} / ‖f‖_{L^p(W)}` over a
/// synthesized corpus in the Paley-Wiener class of `spectrum`. Window
/// truncation makes these estimates of the global ratios, biased by boundary
/// effects of relative size about one wavelength over the window side.
pub fn sampling_ratio(
    surface: &SurfaceSet,
    spectrum: &ConvexBody,
    p: f64,
    window: &Window,
    corpus: usize,
    seed: u64,
) -> Result<SamplingRatioReport> {
    let dim = surface.dim();
    if spectrum.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: spectrum.dim() });
    }
    if window.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: window.dim() });
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter("norm exponent must satisfy p >= 1".into()));
    }
    if corpus == 0 {
        return Err(Error::InvalidParameter("corpus size must be positive".into()));
    }

    let harness = RatioHarness::build(surface, spectrum, window)?;
    let Some(harness) = harness else {
        return Ok(SamplingRatioReport {
            p,
            ratios: vec![0.0; corpus],
            min: 0.0,
            lower_quartile: 0.0,
            median: 0.0,
            upper_quartile: 0.0,
            corpus,
            note: "surface does not meet the window: all ratios are zero".into(),
        });
    };

    let chunks: Vec<Result<Vec<f64>>> = chunked_map(corpus, |_, range| {
        range
            .map(|i| {
                let f = BandlimitedFunction::synthesize(spectrum, 12, true, false, seed ^ i as u64)?;
                Ok(harness.ratio(&f, p))
            })
            .collect()
    });
    let mut ratios = Vec::with_capacity(corpus);
    for chunk in chunks {
        ratios.extend(chunk?);
    }

    let mut sorted = ratios.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(SamplingRatioReport {
        p,
        min: sorted[0],
        lower_quartile: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        upper_quartile: quantile(&sorted, 0.75),
        ratios,
        corpus,
        note: format!(
            "windowed estimates over {} surface nodes and {} window nodes; truncation \
             bias is a boundary effect, not an exact norm",
            harness.gamma_points.len(),
            harness.grid_points.len()
        ),
    })
}

/// The worked lattice example: the nodal set of `prod sin(2 pi x_n)/x_n`.
#[derive(Debug, Clone)]
pub struct SincLatticeReport {
    pub dim: usize,
    pub density: f64,
    pub density_uncertainty: f64,
    /// Candidate density readings the estimate is compared against.
    pub candidate_single: f64,
    pub candidate_sum: f64,
    pub mean_width: f64,
    pub mean_width_closed_form: f64,
    pub mean_width_pass: bool,
    /// `A_d * W(cube)`, which the theory requires to be at least 2.
    pub product: f64,
    pub product_pass: bool,
    /// Largest `|f|` over sampled lattice points (nodal membership check).
    pub nodal_max: f64,
    pub nodal_pass: bool,
    pub notes: Vec<String>,
}

/// Builds the half-integer hyperplane lattice (coordinate hyperplanes
/// excluded), estimates its density, and verifies the mean-width and
/// nodal-membership facts for the cube spectrum `[-1,1]^d`.
pub fn sinc_lattice_example(dim: usize, seed: u64) -> Result<SincLatticeReport> {
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension { dim, min: 2, max: 3 });
    }
    let mut members = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut normal = vec![0.0; dim];
        normal[n] = 1.0;
        members.push(SurfaceSet::hyperplane_family(
            normal,
            0.5,
            0.0,
            [0_i64].into_iter().collect(),
        )?);
    }
    let lattice = SurfaceSet::union(members)?;
    let window = Window::centered_cube(dim, 5.0)?;

    let budgets = CertifyBudgets::default();
    let density = lattice.surface_density(
        &budgets.density_radii,
        &window,
        budgets.density_centers,
        seed,
    )?;

    let cube = ConvexBody::cube(dim, 1.0)?;
    let mean_width = cube.mean_width(&SphereQuadrature::default_for(dim)?)?;
    let closed_form = 4.0 * unit_ball_volume(dim - 1) / unit_ball_volume(dim);
    let mean_width_pass = (mean_width - closed_form).abs() < 1e-5;

    let product = certification_constant(dim)? * mean_width;
    let product_pass = product >= 2.0 - 1e-9;

    let f = SincProduct::new(dim)?;
    let mut rng = stream(seed, 101);
    let mut nodal_max = 0.0_f64;
    let mut sampled = 0;
    while sampled < 1000 {
        if let Some(x) = lattice.sample_point_on(&window, &mut rng) {
            nodal_max = nodal_max.max(f.value(&x).abs());
            sampled += 1;
        }
    }
    let nodal_pass = nodal_max < 1e-9;

    let notes = vec![
        format!(
            "density estimate {:.4} sits near the member-sum reading {} rather than \
             the single-family reading {}; the lattice is the union of {dim} families \
             of spacing 1/2, each contributing density 2",
            density.density,
            2 * dim,
            2
        ),
        "coordinate hyperplanes (k = 0) are excluded so the lattice matches the \
         nodal set of the sinc product, whose k = 0 zeros are cancelled by the \
         1/x_n factors"
            .into(),
    ];

    Ok(SincLatticeReport {
        dim,
        density: density.density,
        density_uncertainty: density.uncertainty,
        candidate_single: 2.0,
        candidate_sum: (2 * dim) as f64,
        mean_width,
        mean_width_closed_form: closed_form,
        mean_width_pass,
        product,
        product_pass,
        nodal_max,
        nodal_pass,
        notes,
    })
}
