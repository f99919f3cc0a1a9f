//! Binomial confidence intervals and deterministic seed splitting.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

/// Stream identifiers for [`derive_seed`].
pub mod streams {
    pub const KEYS: u64 = 1;
    pub const REPRESENTATIVES: u64 = 2;
    pub const OTP: u64 = 3;
    pub const STRATEGY: u64 = 4;
    pub const TRIALS: u64 = 5;
    pub const ATTACKS: u64 = 6;
}

/// Confidence level used for every interval the crate reports.
pub const CONFIDENCE: f64 = 0.99;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.high - self.low
    }

    pub fn contains(&self, v: f64) -> bool {
        self.low <= v && v <= self.high
    }
}

/// Exact (Clopper–Pearson) two-sided interval for `successes / trials`.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Interval {
    assert!(successes <= trials);
    if trials == 0 {
        return Interval { low: 0.0, high: 1.0 };
    }
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let low = if successes == 0 {
        0.0
    } else if successes == trials {
        (alpha / 2.0).powf(1.0 / n)
    } else {
        Beta::new(k, n - k + 1.0)
            .expect("positive shape parameters")
            .inverse_cdf(alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else if successes == 0 {
        1.0 - (alpha / 2.0).powf(1.0 / n)
    } else {
        Beta::new(k + 1.0, n - k)
            .expect("positive shape parameters")
            .inverse_cdf(1.0 - alpha / 2.0)
    };
    Interval { low, high }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for item `index` of stream `stream` under the master seed.
///
/// `splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)`: every
/// (stream, index) pair gets its own generator, so a run split into shards
/// draws exactly the same numbers as a single-threaded run.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ index)
}

pub fn item_rng(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, stream, index))
}

/// Contiguous index ranges, one per shard.
pub fn shard_ranges(total: u64, shards: usize) -> Vec<std::ops::Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = total / shards;
    let extra = total % shards;
    let mut start = 0;
    (0..shards)
        .map(|s| {
            let len = base + u64::from(s < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Total variation distance between two distributions on the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}
