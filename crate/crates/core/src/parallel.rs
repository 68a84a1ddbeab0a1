//! Worker pools with a fixed width.
//!
//! Every parallel loop in the crate splits its index range into contiguous
//! chunks and merges per-chunk results by exact addition, so the outcome does
//! not depend on the number of workers.

use rayon::ThreadPoolBuilder;

/// Runs `job` inside a dedicated pool of `workers` threads (at least one).
pub fn install<T, F>(workers: usize, job: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("failed to build worker pool");
    pool.install(job)
}

/// Splits `0..len` into at most `chunks` contiguous ranges.
pub fn chunk_ranges(len: u64, chunks: u64) -> Vec<std::ops::Range<u64>> {
    let chunks = chunks.clamp(1, len.max(1));
    let step = len.div_ceil(chunks);
    (0..chunks)
        .map(|c| (c * step).min(len)..((c + 1) * step).min(len))
        .filter(|r| !r.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_exactly() {
        for (len, chunks) in [(0, 4), (1, 4), (10, 3), (64, 64), (100, 7)] {
            let rs = chunk_ranges(len, chunks);
            let total: u64 = rs.iter().map(|r| r.end - r.start).sum();
            assert_eq!(total, len);
            for w in rs.windows(2) {
                assert_eq!(w[0].end, w[1].start);
            }
        }
    }
}
