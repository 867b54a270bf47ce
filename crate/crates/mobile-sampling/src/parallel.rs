//! Deterministic chunked parallelism for Monte Carlo loops.
//!
//! Work of size `n` is split into fixed-size chunks. Chunk `i` draws all of
//! its randomness from [`crate::random::stream`]`(seed, i)` and produces a
//! partial result; partials are collected in chunk order and reduced
//! sequentially. Consequences:
//!
//! - results depend only on the seed, never on the rayon pool size;
//! - a `--threads 1` run and a 64-thread run produce identical bytes.

use rayon::prelude::*;

/// Items per random stream. Fixed: changing it would change which stream
/// serves which item and therefore the sampled values.
pub const CHUNK: usize = 4096;

/// Splits `0..n` into `CHUNK`-sized ranges.
pub fn chunk_ranges(n: usize) -> Vec<std::ops::Range<usize>> {
    (0..n.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(n))
        .collect()
}

/// Maps `f(chunk_index, item_range)` over the chunks of `0..n` in parallel
/// and returns the partial results in chunk order.
pub fn chunked_map<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, std::ops::Range<usize>) -> T + Sync,
{
    chunk_ranges(n)
        .into_par_iter()
        .enumerate()
        .map(|(c, range)| f(c as u64, range))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::stream;
    use crate::stats::RunningStats;
    use rand::Rng;

    #[test]
    fn ranges_cover_exactly() {
        for n in [0, 1, CHUNK - 1, CHUNK, CHUNK + 1, 3 * CHUNK + 17] {
            let ranges = chunk_ranges(n);
            let total: usize = ranges.iter().map(|r| r.len()).sum();
            assert_eq!(total, n);
            for w in ranges.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
        }
    }

    #[test]
    fn chunked_reduction_is_pool_independent() {
        // The partials come back in chunk order regardless of scheduling, so
        // the merged result is a pure function of the seed.
        let run = || {
            let partials = chunked_map(10_000, |c, range| {
                let mut rng = stream(99, c);
                let mut s = RunningStats::default();
                for _ in range {
                    s.push(rng.random::<f64>());
                }
                s
            });
            let mut total = RunningStats::default();
            for p in &partials {
                total.merge(p);
            }
            (total.mean(), total.stderr())
        };
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
    }
}
