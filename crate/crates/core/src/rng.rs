//! Deterministic random number generation for the simulation harness.
//!
//! SplitMix64 is used throughout: a 64-bit counter-based generator with a
//! one-word state, full period 2^64 and no known failures on the usual
//! statistical batteries for the amounts of data drawn here. Substreams for
//! contract j are seeded with `seed + j`, so a batch run is reproducible
//! contract by contract regardless of evaluation order.

/// SplitMix64 generator (Steele, Lea, Flood 2014).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Substream for a 1-based contract index, seeded as `seed + index`.
    pub fn substream(seed: u64, index: u64) -> Self {
        SplitMix64::new(seed.wrapping_add(index))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}
