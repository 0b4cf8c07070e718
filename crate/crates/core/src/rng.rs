//! Seedable, implementation-portable random stream for campaign replication.
//!
//! This is SplitMix64 (Steele, Lea, Flood; the `java.util.SplittableRandom`
//! finalizer): state advances by the odd constant 0x9E3779B97F4A7C15 and each
//! output is the mixed state. Any implementation, in any language, that uses
//! these constants reproduces the stream bit for bit, so a campaign seed means
//! the same instance list everywhere. Bounded draws use plain `% n`, which is
//! equally portable; the slight modulo bias is irrelevant for sampling over
//! tiny ranges like field codes.

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `[0, n)`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }
}
