//! Origin-symmetric convex bodies: support functions, mean width, diameter,
//! inflation, and membership tests.
//!
//! A body `K` here is always convex, compact, and symmetric about the origin.
//! Its support function is `h_K(theta) = sup_{x in K} <x, theta>`, and its
//! mean width is
//!
//! ```text
//! W(K) = (2 / (d * omega_d)) * int_{S^{d-1}} h_K(theta) dH^{d-1}(theta),
//! ```
//!
//! the average over directions of the width of `K` between the two supporting
//! hyperplanes orthogonal to the direction. `W` is the quantity a spectrum
//! contributes to the certification threshold `phi(0) * A_d * W(K)`.

use crate::error::{Error, Result};
use crate::geometry::{check_unit_direction, dot, norm};
use crate::quadrature::SphereQuadrature;

/// Relative tolerance for membership tests: points within a `1e-12` relative
/// slack of the boundary count as inside, so exact boundary frequencies are
/// accepted despite rounding.
const MEMBERSHIP_SLACK: f64 = 1e-12;

/// The shape payload of a [`ConvexBody`].
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Euclidean ball of the given radius.
    Ball { radius: f64 },
    /// Axis-aligned box with per-axis half-widths.
    AxisBox { half_widths: Vec<f64> },
    /// Axis-aligned ellipsoid with per-axis semi-axes.
    Ellipsoid { semi_axes: Vec<f64> },
    /// Convex hull of a vertex list that is closed under negation. The facet
    /// normals (outer unit normals, one per facet) make membership exact.
    Polytope { vertices: Vec<Vec<f64>>, facet_normals: Vec<Vec<f64>> },
    /// Minkowski sum of a base body with a ball of radius `kappa`.
    Inflated { base: Box<ConvexBody>, kappa: f64 },
}

/// An origin-symmetric convex body in `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    shape: Shape,
}

fn require_positive(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() || values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} must all be positive and finite")));
    }
    Ok(())
}

impl ConvexBody {
    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension { dim, min: 1, max: usize::MAX });
        }
        require_positive(&[radius], "ball radius")?;
        Ok(ConvexBody { dim, shape: Shape::Ball { radius } })
    }

    pub fn axis_box(half_widths: Vec<f64>) -> Result<Self> {
        require_positive(&half_widths, "box half-widths")?;
        Ok(ConvexBody { dim: half_widths.len(), shape: Shape::AxisBox { half_widths } })
    }

    /// The cube `[-a, a]^d`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        ConvexBody::axis_box(vec![half_width; dim])
    }

    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self> {
        require_positive(&semi_axes, "ellipsoid semi-axes")?;
        Ok(ConvexBody { dim: semi_axes.len(), shape: Shape::Ellipsoid { semi_axes } })
    }

    /// A symmetric polytope from its vertices and outer facet normals.
    ///
    /// The vertex list must be closed under negation (checked within 1e-12
    /// relative), every vertex must be nonzero, and the facet normals must be
    /// unit vectors describing every facet of the hull — membership tests are
    /// only as exact as this list is complete. Normals are validated against
    /// the vertices: each vertex must satisfy `<v, n> <= h(n)` trivially and
    /// each normal must support at least one vertex.
    pub fn polytope(vertices: Vec<Vec<f64>>, facet_normals: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("polytope needs at least one vertex".into()));
        }
        let dim = vertices[0].len();
        if dim == 0 {
            return Err(Error::UnsupportedDimension { dim, min: 1, max: usize::MAX });
        }
        let scale = vertices
            .iter()
            .map(|v| norm(v))
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return Err(Error::InvalidParameter("polytope vertices are all zero".into()));
        }
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
            }
            let has_negation = vertices.iter().any(|w| {
                v.iter().zip(w).all(|(a, b)| (a + b).abs() <= 1e-12 * scale.max(1.0))
            });
            if !has_negation {
                return Err(Error::InvalidParameter(
                    "polytope vertex list is not closed under negation".into(),
                ));
            }
        }
        if facet_normals.is_empty() {
            return Err(Error::InvalidParameter("polytope needs facet normals".into()));
        }
        for n in &facet_normals {
            check_unit_direction(n, dim)?;
        }
        Ok(ConvexBody { dim, shape: Shape::Polytope { vertices, facet_normals } })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Support function `h_K(theta)` for a unit direction `theta`.
    pub fn support(&self, theta: &[f64]) -> Result<f64> {
        check_unit_direction(theta, self.dim)?;
        Ok(self.support_unchecked(theta))
    }

    /// Support function without the unit-norm check; quadrature loops call
    /// this with nodes that are unit by construction.
    pub(crate) fn support_unchecked(&self, theta: &[f64]) -> f64 {
        match &self.shape {
            Shape::Ball { radius } => *radius,
            Shape::AxisBox { half_widths } => {
                half_widths.iter().zip(theta).map(|(a, t)| a * t.abs()).sum()
            }
            Shape::Ellipsoid { semi_axes } => semi_axes
                .iter()
                .zip(theta)
                .map(|(s, t)| (s * t) * (s * t))
                .sum::<f64>()
                .sqrt(),
            Shape::Polytope { vertices, .. } => vertices
                .iter()
                .map(|v| dot(v, theta))
                .fold(f64::NEG_INFINITY, f64::max),
            Shape::Inflated { base, kappa } => base.support_unchecked(theta) + kappa,
        }
    }

    /// Mean width `W(K)` via sphere quadrature.
    ///
    /// Exact (to rounding) for balls; for boxes and axis-aligned ellipsoids
    /// the default rules are below 1e-6 absolute error because their support
    /// functions are analytic on each quadrature panel.
    pub fn mean_width(&self, q: &SphereQuadrature) -> Result<f64> {
        if q.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: q.dim() });
        }
        let total = q.integrate(|t| self.support_unchecked(t));
        Ok(2.0 * total / crate::geometry::sphere_measure(self.dim))
    }

    /// Diameter of `K`. Closed forms where available (ball, box, polytope,
    /// inflated); for ellipsoids the maximizing direction is refined from the
    /// best quadrature node by ascent (power iteration), which converges to
    /// the longest axis.
    pub fn diameter(&self, q: &SphereQuadrature) -> Result<f64> {
        if q.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: q.dim() });
        }
        Ok(match &self.shape {
            Shape::Ball { radius } => 2.0 * radius,
            // The farthest vertex pair of an origin-symmetric body is (v, -v)
            // for the vertex of maximal norm.
            Shape::AxisBox { half_widths } => 2.0 * norm(half_widths),
            Shape::Polytope { vertices, .. } => {
                2.0 * vertices.iter().map(|v| norm(v)).fold(0.0_f64, f64::max)
            }
            Shape::Ellipsoid { semi_axes } => {
                let mut best = q
                    .iter()
                    .max_by(|a, b| {
                        self.support_unchecked(a.0)
                            .total_cmp(&self.support_unchecked(b.0))
                    })
                    .map(|(t, _)| t.to_vec())
                    .unwrap();
                // Ascent step for h(theta) = |S theta|: theta <- S^2 theta
                // normalized. Fixed points are the principal axes; iteration
                // from the best node converges to the longest one.
                for _ in 0..200 {
                    let mut next: Vec<f64> = best
                        .iter()
                        .zip(semi_axes)
                        .map(|(t, s)| s * s * t)
                        .collect();
                    let n = norm(&next);
                    for x in &mut next {
                        *x /= n;
                    }
                    if crate::geometry::dist_sq(&next, &best) < 1e-30 {
                        best = next;
                        break;
                    }
                    best = next;
                }
                2.0 * self.support_unchecked(&best)
            }
            Shape::Inflated { base, kappa } => base.diameter(q)? + 2.0 * kappa,
        })
    }

    /// Minkowski sum with a ball of radius `kappa`; nested inflations are
    /// flattened so distances stay exact.
    pub fn inflate(self, kappa: f64) -> Result<Self> {
        require_positive(&[kappa], "inflation radius")?;
        let dim = self.dim;
        Ok(match self.shape {
            Shape::Ball { radius } => ConvexBody::ball(dim, radius + kappa)?,
            Shape::Inflated { base, kappa: k0 } => {
                ConvexBody { dim, shape: Shape::Inflated { base, kappa: k0 + kappa } }
            }
            shape => ConvexBody {
                dim,
                shape: Shape::Inflated { base: Box::new(ConvexBody { dim, shape }), kappa },
            },
        })
    }

    /// Exact membership `xi in K` (within a 1e-12 relative boundary slack).
    ///
    /// Inflated bodies support only ball and box bases, whose distance
    /// functions are closed-form; other bases would make membership
    /// approximate, which this routine refuses to silently provide.
    pub fn contains_frequency(&self, xi: &[f64]) -> Result<bool> {
        if xi.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: xi.len() });
        }
        match &self.shape {
            Shape::Ball { radius } => Ok(norm(xi) <= radius * (1.0 + MEMBERSHIP_SLACK)),
            Shape::AxisBox { half_widths } => Ok(xi
                .iter()
                .zip(half_widths)
                .all(|(x, a)| x.abs() <= a * (1.0 + MEMBERSHIP_SLACK))),
            Shape::Ellipsoid { semi_axes } => {
                let s: f64 = xi
                    .iter()
                    .zip(semi_axes)
                    .map(|(x, a)| (x / a) * (x / a))
                    .sum();
                Ok(s <= 1.0 + 2.0 * MEMBERSHIP_SLACK)
            }
            Shape::Polytope { vertices, facet_normals } => {
                for n in facet_normals {
                    let h = vertices
                        .iter()
                        .map(|v| dot(v, n))
                        .fold(f64::NEG_INFINITY, f64::max);
                    if dot(xi, n) > h + MEMBERSHIP_SLACK * (1.0 + h.abs()) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Shape::Inflated { base, kappa } => {
                let dist = match &base.shape {
                    Shape::Ball { radius } => (norm(xi) - radius).max(0.0),
                    Shape::AxisBox { half_widths } => xi
                        .iter()
                        .zip(half_widths)
                        .map(|(x, a)| (x.abs() - a).max(0.0).powi(2))
                        .sum::<f64>()
                        .sqrt(),
                    _ => return Err(Error::ApproximateMembership),
                };
                Ok(dist <= kappa * (1.0 + MEMBERSHIP_SLACK) + MEMBERSHIP_SLACK)
            }
        }
    }

    /// The dilate `lambda * K`.
    pub fn scale(&self, lambda: f64) -> Result<Self> {
        require_positive(&[lambda], "scale factor")?;
        let dim = self.dim;
        Ok(match &self.shape {
            Shape::Ball { radius } => ConvexBody::ball(dim, radius * lambda)?,
            Shape::AxisBox { half_widths } => {
                ConvexBody::axis_box(half_widths.iter().map(|a| a * lambda).collect())?
            }
            Shape::Ellipsoid { semi_axes } => {
                ConvexBody::ellipsoid(semi_axes.iter().map(|a| a * lambda).collect())?
            }
            Shape::Polytope { vertices, facet_normals } => ConvexBody::polytope(
                vertices
                    .iter()
                    .map(|v| v.iter().map(|x| x * lambda).collect())
                    .collect(),
                facet_normals.clone(),
            )?,
            Shape::Inflated { base, kappa } => ConvexBody {
                dim,
                shape: Shape::Inflated {
                    base: Box::new(base.scale(lambda)?),
                    kappa: kappa * lambda,
                },
            },
        })
    }

    /// Half-widths of the axis-aligned bounding box, `h_K(e_i)`; used as the
    /// proposal box for rejection-sampling frequencies in `K`.
    pub fn bounding_half_widths(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| {
                let mut e = vec![0.0; self.dim];
                e[i] = 1.0;
                self.support_unchecked(&e)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::unit_ball_volume;
    use std::f64::consts::PI;

    fn q(dim: usize) -> SphereQuadrature {
        SphereQuadrature::default_for(dim).unwrap()
    }

    /// The standard cross-polytope (unit l1 ball) in `R^d`.
    fn cross_polytope(dim: usize) -> ConvexBody {
        let mut vertices = Vec::new();
        for i in 0..dim {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            vertices.push(v.clone());
            v[i] = -1.0;
            vertices.push(v);
        }
        // Facet normals: all sign patterns of (1,..,1)/sqrt(d).
        let mut normals = Vec::new();
        for mask in 0..(1u32 << dim) {
            let n: Vec<f64> = (0..dim)
                .map(|i| {
                    let s = if mask >> i & 1 == 1 { -1.0 } else { 1.0 };
                    s / (dim as f64).sqrt()
                })
                .collect();
            normals.push(n);
        }
        ConvexBody::polytope(vertices, normals).unwrap()
    }

    #[test]
    fn support_closed_forms() {
        let t = [0.6, 0.8];
        assert!((ConvexBody::ball(2, 2.5).unwrap().support(&t).unwrap() - 2.5).abs() < 1e-15);
        let b = ConvexBody::axis_box(vec![1.0, 3.0]).unwrap();
        assert!((b.support(&t).unwrap() - (0.6 + 2.4)).abs() < 1e-15);
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        assert!((e.support(&t).unwrap() - (1.2_f64.powi(2) + 0.8_f64.powi(2)).sqrt()).abs() < 1e-15);
        let p = cross_polytope(2);
        assert!((p.support(&t).unwrap() - 0.8).abs() < 1e-15);
        let infl = ConvexBody::ball(2, 1.0).unwrap().inflate(0.5).unwrap();
        assert!((infl.support(&t).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn support_rejects_bad_directions() {
        let k = ConvexBody::ball(2, 1.0).unwrap();
        assert!(matches!(
            k.support(&[0.5, 0.5]),
            Err(Error::NonUnitDirection { .. })
        ));
        assert!(matches!(
            k.support(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn mean_width_of_balls_is_diameter() {
        for d in 1..=4 {
            for r in [0.5, 1.0, 3.0] {
                let k = ConvexBody::ball(d, r).unwrap();
                let w = k.mean_width(&q(d)).unwrap();
                assert!(
                    (w - 2.0 * r).abs() < 1e-8,
                    "d = {d}, r = {r}: W = {w}"
                );
            }
        }
    }

    #[test]
    fn mean_width_of_cube_closed_form() {
        // W([-1,1]^d) = 4 * omega_{d-1} / omega_d: 8/pi, 3, 32/(3 pi).
        for d in 2..=4 {
            let k = ConvexBody::cube(d, 1.0).unwrap();
            let w = k.mean_width(&q(d)).unwrap();
            let exact = 4.0 * unit_ball_volume(d - 1) / unit_ball_volume(d);
            assert!(
                (w - exact).abs() < 1e-6,
                "d = {d}: W = {w} vs {exact}"
            );
        }
        // d = 2 check against the literal value 8/pi.
        let w2 = ConvexBody::cube(2, 1.0).unwrap().mean_width(&q(2)).unwrap();
        assert!((w2 - 8.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn mean_width_in_d1_is_length() {
        // In d = 1 the "sphere" is two points and W equals the interval length.
        let k = ConvexBody::ball(1, 1.5).unwrap(); // interval [-1.5, 1.5]
        assert!((k.mean_width(&q(1)).unwrap() - 3.0).abs() < 1e-12);
        let b = ConvexBody::axis_box(vec![0.25]).unwrap();
        assert!((b.mean_width(&q(1)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mean_width_monotone_under_inclusion() {
        // Ball(1) is contained in the unit cube, which is contained in
        // Ball(sqrt(2)) in d = 2; widths must be ordered.
        let quad = q(2);
        let wb = ConvexBody::ball(2, 1.0).unwrap().mean_width(&quad).unwrap();
        let wc = ConvexBody::cube(2, 1.0).unwrap().mean_width(&quad).unwrap();
        let wo = ConvexBody::ball(2, 2.0_f64.sqrt()).unwrap().mean_width(&quad).unwrap();
        assert!(wb < wc && wc < wo);
    }

    #[test]
    fn inflation_adds_twice_kappa_exactly() {
        // W(K + kappa B) = W(K) + 2 kappa, an exact Minkowski identity; the
        // quadrature inherits it to rounding because the added term is a
        // constant. Sweep shapes and kappas.
        let quad2 = q(2);
        let quad3 = q(3);
        let shapes2: Vec<ConvexBody> = vec![
            ConvexBody::ball(2, 0.7).unwrap(),
            ConvexBody::cube(2, 1.0).unwrap(),
            ConvexBody::ellipsoid(vec![2.0, 0.5]).unwrap(),
            cross_polytope(2),
        ];
        let shapes3: Vec<ConvexBody> = vec![
            ConvexBody::ball(3, 1.2).unwrap(),
            ConvexBody::cube(3, 0.5).unwrap(),
            ConvexBody::ellipsoid(vec![1.0, 2.0, 3.0]).unwrap(),
            cross_polytope(3),
        ];
        for (k, quad) in shapes2
            .into_iter()
            .map(|k| (k, &quad2))
            .chain(shapes3.into_iter().map(|k| (k, &quad3)))
        {
            for kappa in [0.1, 1.0, 2.5] {
                let w0 = k.mean_width(quad).unwrap();
                let w1 = k.clone().inflate(kappa).unwrap().mean_width(quad).unwrap();
                assert!(
                    (w1 - w0 - 2.0 * kappa).abs() < 1e-7,
                    "additivity broke: {w1} vs {w0} + {}",
                    2.0 * kappa
                );
            }
        }
    }

    #[test]
    fn diameters() {
        let quad = q(2);
        assert!((ConvexBody::ball(2, 1.0).unwrap().diameter(&quad).unwrap() - 2.0).abs() < 1e-12);
        // Interval [-a, a] in d = 1 has diameter 2a.
        assert!(
            (ConvexBody::axis_box(vec![0.75]).unwrap().diameter(&q(1)).unwrap() - 1.5).abs()
                < 1e-12
        );
        // Box: twice the norm of the half-width vector.
        let b = ConvexBody::axis_box(vec![3.0, 4.0]).unwrap();
        assert!((b.diameter(&quad).unwrap() - 10.0).abs() < 1e-12);
        // Ellipsoid: twice the longest semi-axis, found by ascent.
        let e = ConvexBody::ellipsoid(vec![0.5, 2.0]).unwrap();
        assert!((e.diameter(&quad).unwrap() - 4.0).abs() < 1e-9);
        let e3 = ConvexBody::ellipsoid(vec![1.0, 3.0, 0.2]).unwrap();
        assert!((e3.diameter(&q(3)).unwrap() - 6.0).abs() < 1e-9);
        // Cross-polytope: vertices at distance 1.
        assert!((cross_polytope(3).diameter(&q(3)).unwrap() - 2.0).abs() < 1e-12);
        // Inflation adds 2 kappa.
        let infl = ConvexBody::cube(2, 1.0).unwrap().inflate(0.25).unwrap();
        assert!((infl.diameter(&quad).unwrap() - (2.0 * 2.0_f64.sqrt() + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn membership_closed_forms() {
        let ball = ConvexBody::ball(2, 1.0).unwrap();
        assert!(ball.contains_frequency(&[0.6, 0.8]).unwrap()); // boundary
        assert!(!ball.contains_frequency(&[0.8, 0.8]).unwrap());
        let b = ConvexBody::axis_box(vec![1.0, 2.0]).unwrap();
        assert!(b.contains_frequency(&[1.0, -2.0]).unwrap());
        assert!(!b.contains_frequency(&[1.1, 0.0]).unwrap());
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        assert!(e.contains_frequency(&[2.0, 0.0]).unwrap());
        assert!(!e.contains_frequency(&[1.9, 0.5]).unwrap());
        let p = cross_polytope(2);
        assert!(p.contains_frequency(&[0.5, 0.5]).unwrap());
        assert!(!p.contains_frequency(&[0.6, 0.5]).unwrap());
    }

    #[test]
    fn membership_for_inflated_bodies() {
        let k = ConvexBody::axis_box(vec![1.0, 1.0]).unwrap().inflate(0.5).unwrap();
        assert!(k.contains_frequency(&[1.3, 1.0]).unwrap());
        assert!(k.contains_frequency(&[1.3, 1.3]).unwrap()); // corner dist ~0.424
        assert!(!k.contains_frequency(&[1.4, 1.4]).unwrap()); // corner dist ~0.566
        let kb = ConvexBody::ball(3, 1.0).unwrap().inflate(0.2).unwrap();
        // ball(r).inflate(k) collapses to ball(r + k), so membership is exact.
        assert!(kb.contains_frequency(&[1.2, 0.0, 0.0]).unwrap());
        // Non-ball/box bases refuse to answer approximately.
        let ke = ConvexBody::ellipsoid(vec![1.0, 2.0])
            .unwrap()
            .inflate(0.1)
            .unwrap();
        // inflate() wraps the ellipsoid rather than collapsing it.
        assert!(matches!(
            ke.contains_frequency(&[0.0, 0.0]),
            Err(Error::ApproximateMembership)
        ));
    }

    #[test]
    fn nested_inflation_flattens() {
        let k = ConvexBody::cube(2, 1.0)
            .unwrap()
            .inflate(0.25)
            .unwrap()
            .inflate(0.25)
            .unwrap();
        match k.shape() {
            Shape::Inflated { kappa, .. } => assert_eq!(*kappa, 0.5),
            other => panic!("expected flattened inflation, got {other:?}"),
        }
        // Membership agrees with a single 0.5 inflation.
        assert!(k.contains_frequency(&[1.5, 1.0]).unwrap());
        assert!(!k.contains_frequency(&[1.51, 1.0]).unwrap());
    }

    #[test]
    fn scaling_scales_width_and_diameter() {
        let quad = q(3);
        let k = ConvexBody::ellipsoid(vec![1.0, 2.0, 0.5]).unwrap();
        let k3 = k.scale(3.0).unwrap();
        assert!(
            (k3.mean_width(&quad).unwrap() - 3.0 * k.mean_width(&quad).unwrap()).abs() < 1e-9
        );
        assert!((k3.diameter(&quad).unwrap() - 3.0 * k.diameter(&quad).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn polytope_validation() {
        // Missing negation.
        assert!(ConvexBody::polytope(
            vec![vec![1.0, 0.0]],
            vec![vec![1.0, 0.0]],
        )
        .is_err());
        // Non-unit normal.
        assert!(ConvexBody::polytope(
            vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
            vec![vec![2.0, 0.0]],
        )
        .is_err());
    }

    #[test]
    fn bounding_half_widths_cover_shapes() {
        let e = ConvexBody::ellipsoid(vec![2.0, 0.5]).unwrap();
        let b = e.bounding_half_widths();
        assert!((b[0] - 2.0).abs() < 1e-12 && (b[1] - 0.5).abs() < 1e-12);
        let p = cross_polytope(3);
        for w in p.bounding_half_widths() {
            assert!((w - 1.0).abs() < 1e-12);
        }
    }
}
