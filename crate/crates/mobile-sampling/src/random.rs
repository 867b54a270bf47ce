//! Deterministic random streams and geometric samplers.
//!
//! All Monte Carlo in this crate draws from ChaCha8, a named, versioned,
//! counter-based generator. A master `u64` seed plus a stream index pins down
//! every draw, so estimates are reproducible bit-for-bit for a given seed and
//! independent of how work is split across threads (each work chunk owns its
//! stream; see [`crate::parallel`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Stream `index` of master seed `seed`. Distinct indices give statistically
/// independent generators with the same key.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform direction on `S^{d-1}` by normalizing a standard Gaussian vector.
pub fn sample_direction(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    assert!(dim >= 1, "direction needs a positive dimension");
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let n = crate::geometry::norm(&v);
        // A Gaussian vector is almost never this short; the retry guards the
        // normalization rather than biasing it.
        if n > 1e-8 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Uniform point in the ball `B(0, radius)` in `R^d`: uniform direction
/// scaled by `radius * U^{1/d}`, which is the exact radial law.
pub fn sample_point_in_ball(dim: usize, radius: f64, rng: &mut impl Rng) -> Vec<f64> {
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    let mut v = sample_direction(dim, rng);
    for x in &mut v {
        *x *= r;
    }
    v
}
