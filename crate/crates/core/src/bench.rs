//! Random inputs and timing for the full sorter.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ordering::{Color, SockOrdering};
use crate::sorter::full_sort;

/// `len` socks with colors drawn uniformly from `colors`, reproducible from
/// `(len, colors, seed)`.
pub fn random_ordering(len: usize, colors: u32, seed: u64) -> SockOrdering {
    assert!(colors > 0 || len == 0, "need at least one color");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (len as u64).rotate_left(32));
    (0..len).map(|_| Color(rng.gen_range(0..colors))).collect()
}

/// FNV-1a over the little-endian color ids.
pub fn digest(input: &SockOrdering) -> u64 {
    input
        .iter()
        .flat_map(|c| c.id().to_le_bytes())
        .fold(0xcbf2_9ce4_8422_2325, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
        })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub colors: u32,
    /// FNV-1a digest of the input color ids, for reproducibility checks.
    pub input_digest: String,
    pub sortable: bool,
    /// Fastest of the repeated runs.
    pub min_ms: f64,
    pub median_ms: f64,
}

fn millis(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Times `full_sort` on one random input per size, `repeats` runs each.
pub fn run_bench(sizes: &[usize], colors: u32, seed: u64, repeats: usize) -> Vec<BenchRow> {
    let repeats = repeats.max(1);
    sizes
        .iter()
        .map(|&size| {
            let input = random_ordering(size, colors, seed);
            let mut sortable = false;
            let mut times: Vec<f64> = (0..repeats)
                .map(|_| {
                    let start = Instant::now();
                    let report = full_sort(&input).expect("sorter contract");
                    let elapsed = start.elapsed();
                    sortable = report.is_sorted();
                    millis(elapsed)
                })
                .collect();
            times.sort_by(f64::total_cmp);
            BenchRow {
                size,
                colors,
                input_digest: format!("{:016x}", digest(&input)),
                sortable,
                min_ms: times[0],
                median_ms: times[times.len() / 2],
            }
        })
        .collect()
}

/// Least-squares slope of `ln(time)` against `ln(size)`.
pub fn loglog_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(n, t)| n > 0 && t > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_reproducible() {
        let a = random_ordering(100, 7, 42);
        assert_eq!(a, random_ordering(100, 7, 42));
        assert_ne!(a, random_ordering(100, 7, 43));
        assert!(a.iter().all(|c| c.id() < 7));
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(usize, f64)> = [10, 20, 40, 80]
            .iter()
            .map(|&n| (n, (n * n) as f64))
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(loglog_slope(&pts[..1]), None);
    }
}
