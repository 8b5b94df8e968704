//! Linear congruential uniform stream `x' = (23456789 x + 22185) mod 2^32`.

/// Multiplier of the generator.
pub const MULTIPLIER: u64 = 23_456_789;
/// Increment of the generator.
pub const INCREMENT: u64 = 22_185;
/// Modulus, `2^32`.
pub const MODULUS: f64 = 4_294_967_296.0;

/// Current term of the congruential sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState(pub u32);

impl RngState {
    pub fn new(seed: u32) -> Self {
        RngState(seed)
    }

    /// The next term of the sequence.
    pub fn step(self) -> RngState {
        let x = (MULTIPLIER * self.0 as u64 + INCREMENT) & 0xFFFF_FFFF;
        RngState(x as u32)
    }

    /// Advances the stream and returns a uniform in the open interval (0, 1).
    ///
    /// Terms equal to zero are skipped, so the result is never 0; it cannot
    /// be 1 because terms are below the modulus.
    pub fn next_uniform(&mut self) -> f64 {
        loop {
            *self = self.step();
            if self.0 != 0 {
                return self.0 as f64 / MODULUS;
            }
        }
    }
}

/// Seed for the `index`-th independent substream of `master`.
///
/// The pair is folded with the golden-ratio increment and passed through the
/// SplitMix64 finalizer; the low 32 bits become the LCG seed.
pub fn substream_seed(master: u64, index: u64) -> u32 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_values() {
        assert_eq!(RngState(0).step(), RngState(22_185));
        assert_eq!(RngState(1).step(), RngState(23_478_974));
        assert_eq!(RngState(u32::MAX).step(), RngState(4_271_532_692));
    }

    #[test]
    fn uniform_from_one() {
        let mut s = RngState(1);
        let u = s.next_uniform();
        assert_eq!(u, 23_478_974.0 / MODULUS);
        assert!((u - 0.005_466_6).abs() < 1e-6);
    }

    #[test]
    fn zero_terms_are_skipped() {
        // the predecessor of 0 solves 23456789 x + 22185 = 0 mod 2^32
        let inv = {
            // Newton iteration for the inverse of an odd number mod 2^32
            let a = MULTIPLIER as u32;
            let mut x = a;
            for _ in 0..5 {
                x = x.wrapping_mul(2u32.wrapping_sub(a.wrapping_mul(x)));
            }
            x
        };
        let pred = (0u32.wrapping_sub(INCREMENT as u32)).wrapping_mul(inv);
        assert_eq!(RngState(pred).step(), RngState(0));
        let mut s = RngState(pred);
        let u = s.next_uniform();
        assert!(u > 0.0);
        assert_eq!(s, RngState(0).step());
    }

    #[test]
    fn million_draws_in_open_interval() {
        let mut s = RngState(12_345);
        for _ in 0..1_000_000 {
            let u = s.next_uniform();
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn streams_are_deterministic() {
        let mut a = RngState(12_345);
        let mut b = RngState(12_345);
        for _ in 0..1000 {
            assert_eq!(a.next_uniform().to_bits(), b.next_uniform().to_bits());
        }
    }

    #[test]
    fn substreams_differ() {
        let seeds: Vec<u32> = (0..100).map(|i| substream_seed(20_170_101, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(substream_seed(7, 3), substream_seed(7, 3));
    }
}
