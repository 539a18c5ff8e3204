//! Deterministic counter-based uniform noise.
//!
//! A [`NoiseStream`] models one realisation omega = (alpha_1, alpha_2, ...) of
//! i.i.d. Uniform[0,1) translation parameters. Draw `k` is a pure function of
//! `(seed, stream_id, k)` — there is no mutable generator state — which buys
//! three properties the estimators rely on:
//!
//! - *random access*: pullback constructions read draws in reverse order at
//!   no extra cost;
//! - *cheap shifts*: the time shift `theta^m omega` is an offset, so cocycle
//!   identities can be checked bit-for-bit;
//! - *schedule independence*: parallel sampling partitions work by stream id
//!   and the result cannot depend on thread count.
//!
//! The generator hashes the triple through three rounds of the SplitMix64
//! finaliser (one absorption per component). Uniforms take the top 53 bits,
//! so every draw lies in `[0, 1)` exactly.

/// SplitMix64 finalising permutation; full-avalanche 64 -> 64 bit mixer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Derives a stream id from an experiment label and a sample index, so that
/// every Monte Carlo sample owns an independent stream regardless of how the
/// work is scheduled. The label hash is FNV-1a (stable across platforms and
/// compiler versions, unlike `std::hash`).
pub fn derive_stream_id(label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix64(h ^ mix64(index.wrapping_add(GOLDEN_GAMMA)))
}

/// One two-sided-indexable realisation of the i.i.d. noise sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NoiseStream {
    seed: u64,
    stream_id: u64,
    cursor: u64,
}

impl NoiseStream {
    /// Stream for a `(seed, stream_id)` pair, cursor at the origin.
    pub fn new(seed: u64, stream_id: u64) -> NoiseStream {
        NoiseStream {
            seed,
            stream_id,
            cursor: 0,
        }
    }

    /// Stream owned by Monte Carlo sample `index` of the experiment `label`.
    pub fn for_sample(seed: u64, label: &str, index: u64) -> NoiseStream {
        NoiseStream::new(seed, derive_stream_id(label, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Current shift offset from the origin of the underlying sequence.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    /// The `k`-th translation parameter, `k >= 1`; always in `[0, 1)`.
    ///
    /// Pure in `(seed, stream_id, cursor + k)`: two streams with equal fields
    /// agree on every draw, in any order of interrogation.
    #[inline]
    pub fn draw(&self, k: u64) -> f64 {
        assert!(k >= 1, "draws are indexed from 1");
        let counter = self.cursor.wrapping_add(k);
        let mut h = self.seed;
        h = mix64(h ^ GOLDEN_GAMMA);
        h = mix64(h ^ self.stream_id);
        h = mix64(h ^ counter.wrapping_mul(GOLDEN_GAMMA));
        // Top 53 bits -> dyadic rational in [0, 1).
        (h >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// The time-shifted stream `theta^m omega`: its draw `k` equals this
    /// stream's draw `m + k`.
    pub fn shift(&self, m: u64) -> NoiseStream {
        NoiseStream {
            seed: self.seed,
            stream_id: self.stream_id,
            cursor: self.cursor.wrapping_add(m),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_lie_in_unit_interval() {
        let s = NoiseStream::new(42, 7);
        for k in 1..=10_000 {
            let u = s.draw(k);
            assert!((0.0..1.0).contains(&u), "draw {k} = {u}");
        }
    }

    #[test]
    fn draws_are_pure_and_reproducible() {
        let a = NoiseStream::new(123, 456);
        let b = NoiseStream::new(123, 456);
        let forward: Vec<f64> = (1..=100).map(|k| a.draw(k)).collect();
        let backward: Vec<f64> = (1..=100).rev().map(|k| b.draw(k)).collect();
        for (k, (f, r)) in forward.iter().zip(backward.iter().rev()).enumerate() {
            assert_eq!(f, r, "draw {} differs by interrogation order", k + 1);
        }
        // Re-interrogation yields identical values.
        assert_eq!(a.draw(57), a.draw(57));
    }

    #[test]
    fn distinct_streams_differ() {
        let a = NoiseStream::new(1, 0);
        let b = NoiseStream::new(1, 1);
        let c = NoiseStream::new(2, 0);
        assert_ne!(a.draw(1), b.draw(1));
        assert_ne!(a.draw(1), c.draw(1));
    }

    #[test]
    fn shift_is_reindexing() {
        let s = NoiseStream::new(9, 4);
        let t = s.shift(3);
        for k in 1..=100 {
            assert_eq!(t.draw(k), s.draw(3 + k));
        }
    }

    #[test]
    fn shift_zero_is_identity_and_shifts_compose() {
        let s = NoiseStream::new(5, 11);
        assert_eq!(s.shift(0), s);
        assert_eq!(s.shift(2).shift(7), s.shift(9));
        for k in 1..=50 {
            assert_eq!(s.shift(2).shift(7).draw(k), s.draw(9 + k));
        }
    }

    #[test]
    #[should_panic(expected = "indexed from 1")]
    fn draw_zero_is_rejected() {
        NoiseStream::new(0, 0).draw(0);
    }

    #[test]
    fn derive_stream_id_separates_labels_and_indices() {
        let mut seen = std::collections::HashSet::new();
        for label in ["lyapunov", "sync", "contract", "pullback"] {
            for i in 0..1000 {
                assert!(seen.insert(derive_stream_id(label, i)), "collision");
            }
        }
    }

    #[test]
    fn sample_mean_and_variance_near_uniform() {
        let s = NoiseStream::new(2024, 0);
        let n = 100_000u64;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for k in 1..=n {
            let u = s.draw(k);
            sum += u;
            sum_sq += u * u;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        // Uniform[0,1): mean 1/2 (se ~ 0.0009), variance 1/12 (se ~ 0.0008).
        assert!((mean - 0.5).abs() < 0.005, "mean {mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.005, "variance {var}");
    }

    #[test]
    fn serial_correlation_is_negligible() {
        let s = NoiseStream::new(77, 3);
        let n = 100_000u64;
        let mut prev = s.draw(1) - 0.5;
        let mut acc = 0.0;
        for k in 2..=n {
            let u = s.draw(k) - 0.5;
            acc += prev * u;
            prev = u;
        }
        let corr = acc / (n as f64 / 12.0);
        assert!(corr.abs() < 0.02, "lag-1 correlation {corr}");
    }
}
