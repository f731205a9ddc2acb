//! Reproducible per-realisation random streams.
//!
//! Every Monte-Carlo realisation owns an [`RngStream`] keyed by the experiment
//! seed and a stream id. The underlying generator is ChaCha8, whose 64-bit
//! stream selector gives independent, counter-based sequences, so results do
//! not depend on how realisations are scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Uniform index in `[0, bound)`.
    #[inline]
    pub fn index(&mut self, bound: usize) -> usize {
        use rand::Rng;
        self.inner.random_range(0..bound)
    }
}

impl RngCore for RngStream {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_keys_reproduce_sequences() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        // Sample correlation of uniform draws over 10^5 pairs has sd ~ 3e-3.
        let mut a = RngStream::new(9, 100);
        let mut b = RngStream::new(9, 101);
        let n = 100_000;
        let to_unit = |u: u64| (u >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
        let mut sab = 0.0;
        let mut saa = 0.0;
        let mut sbb = 0.0;
        for _ in 0..n {
            let x = to_unit(a.next_u64());
            let y = to_unit(b.next_u64());
            sab += x * y;
            saa += x * x;
            sbb += y * y;
        }
        let corr = sab / (saa * sbb).sqrt();
        assert!(corr.abs() < 0.015, "corr = {corr}");
    }

    #[test]
    fn index_is_in_range() {
        let mut r = RngStream::new(1, 1);
        for bound in 1..50 {
            for _ in 0..20 {
                assert!(r.index(bound) < bound);
            }
        }
    }
}
