//! A small seeded PRNG with purpose-string splitting.
//!
//! Every stochastic component of the pipeline draws from its own stream,
//! derived from a user seed and a fixed purpose string, so adding randomness
//! to one stage never perturbs another and results are reproducible across
//! platforms. The generator is SplitMix64.

/// Deterministic 64-bit generator, splittable by purpose string.
#[derive(Clone, Debug)]
pub struct SplitRng {
    seed: u64,
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

impl SplitRng {
    pub fn new(seed: u64) -> Self {
        SplitRng { seed, state: seed }
    }

    /// Derives an independent stream for `purpose` from the original seed.
    /// Splitting is order-independent: it never consumes from `self`.
    pub fn split(&self, purpose: &str) -> SplitRng {
        SplitRng::new(mix(self.seed ^ fnv1a(purpose.as_bytes())))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform draw in `[0, n)`. Rejection sampling keeps it unbiased.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below(0)");
        let limit = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < limit {
                return v % n;
            }
        }
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn streams_are_reproducible() {
        let mut a = SplitRng::new(7).split("x");
        let mut b = SplitRng::new(7).split("x");
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn purpose_strings_give_distinct_streams() {
        let mut a = SplitRng::new(7).split("shuffle");
        let mut b = SplitRng::new(7).split("init");
        let same = (0..16).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn split_does_not_consume_parent() {
        let parent = SplitRng::new(3);
        let _ = parent.split("a");
        let mut p1 = parent.clone();
        let _ = parent.split("b");
        let mut p2 = parent.clone();
        assert_eq!(p1.next_u64(), p2.next_u64());
    }

    #[test]
    fn next_below_stays_in_range() {
        let mut rng = SplitRng::new(42);
        for n in 1..50u64 {
            for _ in 0..20 {
                assert!(rng.next_below(n) < n);
            }
        }
    }

    #[test]
    fn next_f64_in_unit_interval() {
        let mut rng = SplitRng::new(1);
        for _ in 0..1000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = SplitRng::new(5).split("shuffle");
        let mut xs: Vec<u32> = (0..100).collect();
        rng.shuffle(&mut xs);
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }
}
