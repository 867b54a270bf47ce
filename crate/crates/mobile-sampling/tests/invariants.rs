//! Property suite: structural identities and statistical laws the library
//! must satisfy for every supported shape, dimension, and seed. Each test
//! sweeps randomized instances through the public API; tolerances separate
//! exact identities (rounding-level) from sampled estimates (stated error
//! budgets).

use std::f64::consts::PI;

use mobile_sampling::bandlimited::{BandlimitedFunction, LineFunction};
use mobile_sampling::certify::{certify, CertifyBudgets, Verdict};
use mobile_sampling::convex::ConvexBody;
use mobile_sampling::crofton::{crofton_area, LineCount};
use mobile_sampling::geometry::{dot, norm, sphere_measure, unit_ball_volume, Window};
use mobile_sampling::nodal::zero_count_profile;
use mobile_sampling::quadrature::SphereQuadrature;
use mobile_sampling::random::{sample_direction, sample_point_in_ball, stream};
use mobile_sampling::remez::sublevel_measure;
use mobile_sampling::stats::linear_fit;
use mobile_sampling::surface::SurfaceSet;
use num_complex::Complex64;
use rand::Rng;

fn axis_family(dim: usize, axis: usize, spacing: f64) -> SurfaceSet {
    let mut normal = vec![0.0; dim];
    normal[axis] = 1.0;
    SurfaceSet::hyperplane_family(normal, spacing, 0.0, Default::default()).unwrap()
}

fn cross_polytope() -> ConvexBody {
    let vertices = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
    let s = 0.5_f64.sqrt();
    let normals = vec![vec![s, s], vec![s, -s], vec![-s, s], vec![-s, -s]];
    ConvexBody::polytope(vertices, normals).unwrap()
}

fn body_zoo() -> Vec<ConvexBody> {
    vec![
        ConvexBody::ball(2, 0.8).unwrap(),
        ConvexBody::ball(3, 1.4).unwrap(),
        ConvexBody::cube(3, 0.6).unwrap(),
        ConvexBody::axis_box(vec![0.5, 1.5, 2.0]).unwrap(),
        ConvexBody::ellipsoid(vec![1.2, 0.4]).unwrap(),
        cross_polytope(),
        ConvexBody::ball(2, 0.5).unwrap().inflate(0.3).unwrap(),
    ]
}

/// Gamma(two_x / 2) by the half-integer recurrence Gamma(x + 1) = x Gamma(x),
/// starting from Gamma(1/2) = sqrt(pi) and Gamma(1) = 1. Serves as an
/// independent oracle for the ball-volume recursion.
fn gamma_half(two_x: u64) -> f64 {
    assert!(two_x >= 1);
    let mut value = if two_x % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut two = if two_x % 2 == 0 { 2 } else { 1 };
    while two + 2 <= two_x {
        value *= two as f64 / 2.0;
        two += 2;
    }
    value
}

#[test]
fn sphere_quadrature_mass_symmetry_and_volume_recursion() {
    for dim in 1..=4usize {
        let levels: &[usize] = match dim {
            1 => &[1],
            4 => &[1, 2],
            _ => &[1, 2, 4],
        };
        for &level in levels {
            let q = SphereQuadrature::build(dim, level).unwrap();
            let mass = q.integrate(|_| 1.0);
            assert!(
                (mass - sphere_measure(dim)).abs() < 1e-10,
                "d={dim} level={level}: quadrature mass {mass}"
            );
            // Symmetric closure: the node multiset equals its own reflection
            // with matching weights. Distinct nodes are far apart relative to
            // the 1e-12 match tolerance, so lexicographic sorting aligns each
            // node with its antipode.
            let lex = |a: &(Vec<f64>, f64), b: &(Vec<f64>, f64)| {
                a.0.iter()
                    .zip(&b.0)
                    .map(|(x, y)| x.total_cmp(y))
                    .find(|o| o.is_ne())
                    .unwrap_or(std::cmp::Ordering::Equal)
            };
            let mut nodes: Vec<(Vec<f64>, f64)> =
                (0..q.len()).map(|i| (q.node(i).to_vec(), q.weight(i))).collect();
            let mut reflected: Vec<(Vec<f64>, f64)> = nodes
                .iter()
                .map(|(n, w)| (n.iter().map(|x| -x).collect(), *w))
                .collect();
            nodes.sort_by(lex);
            reflected.sort_by(lex);
            for ((node, w), (anti, w_anti)) in nodes.iter().zip(&reflected) {
                let gap = node
                    .iter()
                    .zip(anti)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(
                    gap < 1e-12 && (w - w_anti).abs() < 1e-12,
                    "d={dim} level={level}: node {node:?} lacks an antipode (gap {gap:.2e})"
                );
            }
            // Consequence: even reflections leave quadratures unchanged.
            let a = [0.9, -0.4, 0.7, 0.2];
            let g = |theta: &[f64]| (dot(theta, &a[..dim])).exp() + dot(theta, &a[..dim]).powi(3);
            let forward = q.integrate(g);
            let reflected = q.integrate(|theta: &[f64]| {
                let neg: Vec<f64> = theta.iter().map(|x| -x).collect();
                g(&neg)
            });
            assert!(
                (forward - reflected).abs() < 1e-10 * forward.abs().max(1.0),
                "d={dim} level={level}: {forward} vs {reflected}"
            );
        }
    }
    // omega_k = omega_(k-1) * sqrt(pi) * Gamma((k+1)/2) / Gamma(k/2 + 1).
    for k in 1..=20u64 {
        let lhs = unit_ball_volume(k as usize);
        let rhs = unit_ball_volume(k as usize - 1) * PI.sqrt() * gamma_half(k + 1)
            / gamma_half(k + 2);
        assert!(
            (lhs - rhs).abs() < 1e-12 * rhs,
            "k={k}: omega {lhs} vs recursion {rhs}"
        );
    }
}

#[test]
fn support_functions_are_symmetric_scaling_and_subadditive() {
    for body in body_zoo() {
        let dim = body.dim();
        let mut rng = stream(31, dim as u64);
        for lambda in [0.25, 3.0] {
            let scaled = body.scale(lambda).unwrap();
            for _ in 0..50 {
                let theta = sample_direction(dim, &mut rng);
                let h = body.support(&theta).unwrap();
                let neg: Vec<f64> = theta.iter().map(|x| -x).collect();
                let h_neg = body.support(&neg).unwrap();
                assert!(
                    (h - h_neg).abs() <= 1e-12 * h.abs().max(1.0),
                    "symmetry: {h} vs {h_neg}"
                );
                let h_scaled = scaled.support(&theta).unwrap();
                assert!(
                    (h_scaled - lambda * h).abs() <= 1e-12 * (lambda * h).abs().max(1.0),
                    "scaling: {h_scaled} vs {}",
                    lambda * h
                );
                // Subadditivity, stated on the unit sphere via the
                // homogeneous extension h(v) = |v| h(v/|v|).
                let phi = sample_direction(dim, &mut rng);
                let sum: Vec<f64> = theta.iter().zip(&phi).map(|(a, b)| a + b).collect();
                let len = norm(&sum);
                if len > 1e-6 {
                    let unit: Vec<f64> = sum.iter().map(|x| x / len).collect();
                    let h_sum = len * body.support(&unit).unwrap();
                    let bound = h + body.support(&phi).unwrap();
                    assert!(h_sum <= bound + 1e-12, "subadditivity: {h_sum} > {bound}");
                }
            }
        }
    }
}

#[test]
fn mean_width_adds_twice_kappa_under_inflation() {
    let mut worst = 0.0_f64;
    for body in body_zoo() {
        let q = SphereQuadrature::default_for(body.dim()).unwrap();
        let base = body.mean_width(&q).unwrap();
        for kappa in [0.1, 0.5, 2.0] {
            let inflated = body.clone().inflate(kappa).unwrap().mean_width(&q).unwrap();
            let err = (inflated - base - 2.0 * kappa).abs();
            assert!(err < 1e-9, "kappa={kappa}: W {inflated} vs {base} + {}", 2.0 * kappa);
            worst = worst.max(err);
        }
    }
    println!("inflation additivity worst error {worst:.3e}");
}

#[test]
fn mean_width_respects_inclusion_and_diameter() {
    // Pairs (K, K') with K inside K', witnessed by support dominance on all
    // quadrature nodes before the widths are compared.
    let pairs = vec![
        (ConvexBody::ball(2, 0.9).unwrap(), ConvexBody::cube(2, 0.9).unwrap()),
        (ConvexBody::cube(2, 1.0).unwrap(), ConvexBody::ball(2, 2.0_f64.sqrt()).unwrap()),
        (ConvexBody::ellipsoid(vec![0.5, 1.0, 1.5]).unwrap(), ConvexBody::ball(3, 1.5).unwrap()),
        (cross_polytope(), ConvexBody::ball(2, 1.0).unwrap()),
        (
            ConvexBody::axis_box(vec![0.5, 1.5]).unwrap(),
            ConvexBody::axis_box(vec![0.6, 1.6]).unwrap(),
        ),
    ];
    for (inner, outer) in pairs {
        let q = SphereQuadrature::default_for(inner.dim()).unwrap();
        for i in 0..q.len() {
            let theta = q.node(i);
            assert!(
                inner.support(theta).unwrap() <= outer.support(theta).unwrap() + 1e-12,
                "support dominance fails at node {i}"
            );
        }
        let w_inner = inner.mean_width(&q).unwrap();
        let w_outer = outer.mean_width(&q).unwrap();
        assert!(w_inner <= w_outer + 1e-12, "W {w_inner} > {w_outer}");
        for body in [&inner, &outer] {
            let w = body.mean_width(&q).unwrap();
            let diam = body.diameter(&q).unwrap();
            assert!(w <= diam + 1e-12, "mean width {w} exceeds diameter {diam}");
        }
    }
}

fn surface_zoo() -> Vec<SurfaceSet> {
    vec![
        SurfaceSet::hyperplane_family(vec![0.6, 0.8], 0.9, 0.3, Default::default()).unwrap(),
        SurfaceSet::sphere_shell(vec![0.5, -0.25], 1.5).unwrap(),
        SurfaceSet::union(vec![axis_family(2, 0, 0.5), axis_family(2, 1, 0.5)]).unwrap(),
        axis_family(3, 2, 0.75),
        SurfaceSet::sphere_shell(vec![0.0, 0.0, 0.4], 2.0).unwrap(),
    ]
}

#[test]
fn ball_measures_are_translation_invariant() {
    for surface in surface_zoo() {
        let dim = surface.dim();
        let mut rng = stream(47, dim as u64);
        for _ in 0..20 {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect();
            let shifted = surface.translate(&v).unwrap();
            for r in [0.7, 1.9, 3.1] {
                let a = surface.measure_in_ball(&x, r).unwrap();
                let moved: Vec<f64> = x.iter().zip(&v).map(|(a, b)| a + b).collect();
                let b = shifted.measure_in_ball(&moved, r).unwrap();
                assert!(
                    (a - b).abs() < 1e-9 * a.max(1.0),
                    "r={r}: {a} vs {b} after translation"
                );
            }
        }
    }
}

#[test]
fn ball_measures_grow_with_radius() {
    for surface in surface_zoo() {
        let dim = surface.dim();
        let mut rng = stream(53, dim as u64);
        for _ in 0..10 {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
            let mut prev = 0.0;
            for k in 1..=40 {
                let r = 0.1 * k as f64;
                let m = surface.measure_in_ball(&x, r).unwrap();
                assert!(
                    m >= prev - 1e-12 * (1.0 + prev),
                    "measure dips from {prev} to {m} at r={r}"
                );
                prev = m;
            }
        }
    }
}

#[test]
fn family_density_scales_inversely_with_spacing() {
    let budgets = CertifyBudgets::default();
    let window = Window::centered_cube(2, budgets.window_half).unwrap();
    let fine = axis_family(2, 0, 0.4)
        .surface_density(&budgets.density_radii, &window, budgets.density_centers, 5)
        .unwrap();
    let coarse = axis_family(2, 0, 0.8)
        .surface_density(&budgets.density_radii, &window, budgets.density_centers, 5)
        .unwrap();
    let err = (2.0 * coarse.density - fine.density).abs() / fine.density;
    assert!(
        err < 0.01,
        "doubling the spacing should halve the density: {} vs {} (rel {err:.4})",
        fine.density,
        coarse.density
    );
    println!(
        "density scaling: spacing 0.4 -> {:.4}, spacing 0.8 -> {:.4}",
        fine.density, coarse.density
    );
}

#[test]
fn discretized_surfaces_reproduce_closed_form_measures() {
    let window = Window::centered_cube(2, 3.0).unwrap();
    let resolution = 0.02;
    let sources = vec![
        SurfaceSet::hyperplane_family(vec![0.6, 0.8], 0.8, 0.1, Default::default()).unwrap(),
        SurfaceSet::sphere_shell(vec![0.0, 0.0], 1.2).unwrap(),
    ];
    let mut rng = stream(61, 0);
    for source in sources {
        let discrete = source.discretize(&window, resolution).unwrap();
        for _ in 0..12 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-1.0..1.0)).collect();
            for r in [0.2, 0.35, 0.5] {
                let exact = source.measure_in_ball(&x, r).unwrap();
                if exact < 0.2 {
                    // Tiny intersections carry one or two grid points; the
                    // relative 2% contract targets bulk measures.
                    continue;
                }
                let approx = discrete.measure_in_ball(&x, r).unwrap();
                let rel = (approx - exact).abs() / exact;
                assert!(
                    rel < 0.02,
                    "r={r} at {x:?}: discrete {approx} vs exact {exact} (rel {rel:.4})"
                );
            }
        }
    }
}

#[test]
fn evaluation_is_linear_and_slice_compatible() {
    let spectrum = ConvexBody::ball(2, 1.0).unwrap();
    let f = BandlimitedFunction::synthesize(&spectrum, 8, true, false, 101).unwrap();
    let g = BandlimitedFunction::synthesize(&spectrum, 6, true, false, 102).unwrap();
    let (alpha, beta) = (0.7, -1.3);
    let mut freqs: Vec<Vec<f64>> = f.frequencies().to_vec();
    freqs.extend(g.frequencies().iter().cloned());
    let mut coeffs: Vec<Complex64> =
        f.coefficients().iter().map(|c| c * Complex64::new(alpha, 0.0)).collect();
    coeffs.extend(g.coefficients().iter().map(|c| c * Complex64::new(beta, 0.0)));
    let combo = BandlimitedFunction::from_terms(spectrum, freqs, coeffs, true).unwrap();

    let mut rng = stream(71, 0);
    for _ in 0..200 {
        let x: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
        let direct = combo.value(&x);
        let linear = f.value(&x) * alpha + g.value(&x) * beta;
        assert!(
            (direct - linear).norm() < 1e-12,
            "linearity at {x:?}: {direct} vs {linear}"
        );
    }

    for dim in [2usize, 3] {
        let k = ConvexBody::ball(dim, 0.9).unwrap();
        let f = BandlimitedFunction::synthesize(&k, 9, true, true, 300 + dim as u64).unwrap();
        let mut rng = stream(72, dim as u64);
        for _ in 0..10 {
            let y: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.5..1.5)).collect();
            let theta = sample_direction(dim, &mut rng);
            let slice = f.slice(&y, &theta).unwrap();
            for k in 0..61 {
                let t = -3.0 + 0.1 * k as f64;
                let point: Vec<f64> =
                    y.iter().zip(&theta).map(|(a, b)| a + t * b).collect();
                let on_line = slice.value(t);
                let ambient = f.value_re(&point);
                assert!(
                    (on_line - ambient).abs() < 1e-12,
                    "slice mismatch at t={t}: {on_line} vs {ambient}"
                );
            }
        }
    }
}

#[test]
fn real_flagged_functions_are_real_on_random_points() {
    let mut checked = 0;
    for dim in 1..=3usize {
        let k = ConvexBody::cube(dim, 0.7).unwrap();
        for seed in 0..4u64 {
            let f = BandlimitedFunction::synthesize(&k, 7, true, false, 900 + seed).unwrap();
            assert!(f.is_real_valued());
            let mut rng = stream(83, seed * 10 + dim as u64);
            for _ in 0..90 {
                let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-4.0..4.0)).collect();
                let im = f.value(&x).im.abs();
                assert!(im < 1e-12, "imaginary part {im} at {x:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 1000, "need at least 1e3 sample points, got {checked}");
}

#[test]
fn dilation_rescales_frequencies_and_values() {
    let k = ConvexBody::ball(2, 1.0).unwrap();
    let f = BandlimitedFunction::synthesize(&k, 10, true, true, 404).unwrap();
    for lambda in [0.5, 8.0] {
        let d = f.dilate(lambda).unwrap();
        for (xi, orig) in d.frequencies().iter().zip(f.frequencies()) {
            for (a, b) in xi.iter().zip(orig) {
                assert!(
                    (a - lambda * b).abs() <= 4.0 * f64::EPSILON * (lambda * b).abs(),
                    "frequency {a} vs {}",
                    lambda * b
                );
            }
        }
        let mut rng = stream(91, lambda.to_bits());
        for _ in 0..100 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-2.0..2.0)).collect();
            let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            let a = d.value_re(&x);
            let b = f.value_re(&scaled);
            assert!((a - b).abs() < 1e-12, "dilate({lambda}) at {x:?}: {a} vs {b}");
        }
    }
}

#[test]
fn synthesis_contract_across_seeds_and_spectra() {
    let mut draws = 0;
    for dim in 1..=3usize {
        let spectra = vec![
            ConvexBody::ball(dim, 0.8).unwrap(),
            ConvexBody::cube(dim, 0.6).unwrap(),
        ];
        for k in spectra {
            for seed in 0..10u64 {
                let anchor = seed % 2 == 0;
                let f = BandlimitedFunction::synthesize(&k, 8, true, anchor, 7_000 + seed)
                    .unwrap();
                for xi in f.frequencies() {
                    assert!(k.contains_frequency(xi).unwrap(), "frequency escaped spectrum");
                }
                let sup = f.certified_sup();
                assert!(
                    (0.999..=1.0 + 1e-9).contains(&sup),
                    "certified sup {sup} outside [0.999, 1]"
                );
                let mut rng = stream(95, seed * 7 + dim as u64);
                for _ in 0..60 {
                    let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-6.0..6.0)).collect();
                    let v = f.value(&x).norm();
                    assert!(v <= sup * (1.0 + 1e-9), "|f| = {v} exceeds certificate {sup}");
                }
                if anchor {
                    let center = f.value_re(&vec![0.0; dim]).abs();
                    assert!(center > 0.5, "anchored draw has |f(0)| = {center}");
                }
                draws += 1;
            }
        }
    }
    println!("synthesis contract held for {draws} draws");
}

#[test]
fn growth_bound_controls_complex_line_values() {
    for seed in 0..6u64 {
        let k = ConvexBody::ball(2, 1.0).unwrap();
        let f = BandlimitedFunction::synthesize(&k, 10, true, true, 11_000 + seed).unwrap();
        let mut rng = stream(97, seed);
        let theta = sample_direction(2, &mut rng);
        let g = f.slice(&[0.0, 0.0], &theta).unwrap();
        for s in [0.1, 0.5, 2.0] {
            let bound = g.growth_bound(s);
            for k in 0..61 {
                let t = -3.0 + 0.1 * k as f64;
                let v = g.value_complex(Complex64::new(t, s)).unwrap().norm();
                assert!(
                    v <= bound * (1.0 + 1e-9),
                    "|g({t} + {s}i)| = {v} exceeds growth bound {bound}"
                );
            }
        }
    }
}

fn ks_uniform(mut u: Vec<f64>) -> f64 {
    u.sort_by(f64::total_cmp);
    let n = u.len() as f64;
    u.iter()
        .enumerate()
        .map(|(i, v)| {
            let below = (v - i as f64 / n).abs();
            let above = ((i + 1) as f64 / n - v).abs();
            below.max(above)
        })
        .fold(0.0, f64::max)
}

#[test]
fn samplers_pass_uniformity_ks() {
    let n = 50_000;

    // Planar directions: the angle is uniform on (-pi, pi].
    let mut rng = stream(301, 0);
    let angles: Vec<f64> = (0..n)
        .map(|_| {
            let d = sample_direction(2, &mut rng);
            (d[1].atan2(d[0]) + PI) / (2.0 * PI)
        })
        .collect();
    let ks_angle = ks_uniform(angles);

    // Spatial directions: the last coordinate is uniform on [-1, 1].
    let mut rng = stream(301, 1);
    let heights: Vec<f64> = (0..n)
        .map(|_| {
            let d = sample_direction(3, &mut rng);
            (d[2] + 1.0) / 2.0
        })
        .collect();
    let ks_height = ks_uniform(heights);

    // Ball points: (|x| / R)^d is uniform on [0, 1].
    let mut rng = stream(301, 2);
    let radii2: Vec<f64> =
        (0..n).map(|_| (norm(&sample_point_in_ball(2, 1.5, &mut rng)) / 1.5).powi(2)).collect();
    let ks_ball2 = ks_uniform(radii2);

    let mut rng = stream(301, 3);
    let radii3: Vec<f64> =
        (0..n).map(|_| (norm(&sample_point_in_ball(3, 2.0, &mut rng)) / 2.0).powi(3)).collect();
    let ks_ball3 = ks_uniform(radii3);

    for (label, ks) in [
        ("angle d=2", ks_angle),
        ("height d=3", ks_height),
        ("ball radius d=2", ks_ball2),
        ("ball radius d=3", ks_ball3),
    ] {
        assert!(ks < 0.01, "{label}: KS statistic {ks:.4} >= 0.01");
    }
    println!(
        "KS statistics: angle {ks_angle:.4}, height {ks_height:.4}, \
         ball d2 {ks_ball2:.4}, ball d3 {ks_ball3:.4}"
    );
}

#[test]
fn crofton_stderr_follows_inverse_sqrt_law() {
    let circle = SurfaceSet::sphere_shell(vec![0.0, 0.0], 1.0).unwrap();
    let mut logs_n = Vec::new();
    let mut logs_e = Vec::new();
    let mut last = None;
    for n in [1_000usize, 10_000, 100_000] {
        let est = crofton_area(
            |line| circle.line_intersection_count(line, 2.0).unwrap_or(LineCount::Infinite),
            2,
            2.0,
            n,
            11,
        )
        .unwrap();
        assert!(!est.discard_warning);
        logs_n.push((n as f64).ln());
        logs_e.push(est.stderr.ln());
        last = Some(est);
    }
    let (_, slope, _) = linear_fit(&logs_n, &logs_e);
    assert!(
        (slope + 0.5).abs() < 0.1,
        "stderr should fall like n^(-1/2); fitted slope {slope:.3}"
    );
    let est = last.unwrap();
    let target = 2.0 * PI;
    assert!(
        (est.value - target).abs() <= 3.0 * est.stderr,
        "circle length {} vs {target} (3 sigma = {})",
        est.value,
        3.0 * est.stderr
    );
    println!("stderr slope {slope:.3}; final estimate {:.4} +- {:.4}", est.value, est.stderr);
}

#[test]
fn verdicts_match_margin_bands_and_shrinkage_monotonicity() {
    let surface =
        SurfaceSet::union(vec![axis_family(2, 0, 1.0), axis_family(2, 1, 1.0)]).unwrap();
    let budgets = CertifyBudgets::default();
    let mut seen_certified = false;
    let mut seen_rejected = false;
    let mut rejected_at = f64::INFINITY;
    for radius in [0.05, 0.2, 0.35, 0.4, 0.43, 0.6, 1.0] {
        let spectrum = ConvexBody::ball(2, radius).unwrap();
        let report = certify(&surface, &spectrum, &budgets, 17).unwrap();
        let expected = if report.margin > report.uncertainty {
            Verdict::Certified
        } else if report.margin < -report.uncertainty {
            Verdict::NotCertified
        } else {
            Verdict::Inconclusive
        };
        assert_eq!(
            report.verdict, expected,
            "radius {radius}: margin {} with band {} gives {:?}",
            report.margin, report.uncertainty, report.verdict
        );
        match report.verdict {
            Verdict::Certified => {
                assert!(
                    radius < rejected_at,
                    "certified at radius {radius} after rejection at {rejected_at}"
                );
                seen_certified = true;
            }
            Verdict::NotCertified => {
                rejected_at = rejected_at.min(radius);
                seen_rejected = true;
            }
            Verdict::Inconclusive => {}
        }
    }
    assert!(seen_certified && seen_rejected, "sweep should cross the threshold");

    // Shrinking the spacing raises the density and never revokes a verdict.
    let tight =
        SurfaceSet::union(vec![axis_family(2, 0, 0.5), axis_family(2, 1, 0.5)]).unwrap();
    let spectrum = ConvexBody::ball(2, 0.2).unwrap();
    let loose_report = certify(&surface, &spectrum, &budgets, 17).unwrap();
    let tight_report = certify(&tight, &spectrum, &budgets, 17).unwrap();
    assert_eq!(loose_report.verdict, Verdict::Certified);
    assert_eq!(tight_report.verdict, Verdict::Certified);
    assert!(tight_report.margin > loose_report.margin);
}

#[test]
fn zero_counts_and_sublevel_measures_are_monotone() {
    for seed in 0..20u64 {
        let k = ConvexBody::ball(2, 1.0).unwrap();
        let f = BandlimitedFunction::synthesize(&k, 9, true, true, 13_000 + seed).unwrap();
        let mut rng = stream(131, seed);
        let theta = sample_direction(2, &mut rng);
        let g = f.slice(&[0.0, 0.0], &theta).unwrap();

        let profile = zero_count_profile(&g, &[0.5, 1.0, 2.0, 4.0, 8.0]).unwrap();
        for pair in profile.counts.windows(2) {
            assert!(pair[1] >= pair[0], "zero counts decreased: {:?}", profile.counts);
        }

        for big_r in [1.0, 2.0, 4.0] {
            let mut prev = 0.0;
            for eps in [1e-3, 1e-2, 0.1, 0.3, 1.0] {
                let m = sublevel_measure(&g, big_r, eps).unwrap();
                assert!((0.0..=big_r + 1e-12).contains(&m), "measure {m} outside [0, {big_r}]");
                assert!(m >= prev - 1e-12, "measure fell from {prev} to {m} at eps={eps}");
                prev = m;
            }
        }
        for eps in [1e-2, 0.3] {
            let mut prev = 0.0;
            for big_r in [1.0, 2.0, 4.0] {
                let m = sublevel_measure(&g, big_r, eps).unwrap();
                assert!(m >= prev - 1e-12, "measure fell from {prev} to {m} at R={big_r}");
                prev = m;
            }
        }
    }
}
