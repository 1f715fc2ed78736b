//! Counter-based pseudo-random number source.
//!
//! The generator is the SplitMix64 finaliser applied to a Weyl sequence:
//! the value at counter `i` is `mix64(base + (i+1)*GAMMA)` where `base`
//! is derived from `(seed, stream_id)`. It is pure 64-bit integer
//! arithmetic, identical on every platform, and random-access: the value
//! at a site does not depend on how many other sites were drawn. Distinct
//! stream ids give independent streams for the same seed, so each logical
//! purpose (signs, flips, parity, ...) owns a stream and extending a
//! window never perturbs values already produced.

/// Golden-ratio increment of the Weyl sequence.
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output mixer (Stafford mix 13).
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded, stream-separated random-access generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeededRng {
    seed: u64,
    stream_id: u64,
    base: u64,
}

impl SeededRng {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let base = mix64(seed ^ mix64(stream_id.wrapping_mul(GAMMA) ^ 0x5851_F42D_4C95_7F2D));
        SeededRng {
            seed,
            stream_id,
            base,
        }
    }

    /// Stream 0 of the given seed.
    pub fn from_seed(seed: u64) -> Self {
        SeededRng::new(seed, 0)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Derive an independent stream for a sub-purpose of this stream.
    pub fn substream(&self, tag: u64) -> SeededRng {
        SeededRng::new(self.seed, mix64(self.stream_id ^ tag.wrapping_mul(GAMMA)))
    }

    /// Raw 64-bit value at the given counter position.
    #[inline]
    pub fn value_at(&self, index: u64) -> u64 {
        mix64(self.base.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    /// Uniform double in `[0, 1)` at the given counter position.
    #[inline]
    pub fn uniform_at(&self, index: u64) -> f64 {
        // Top 53 bits scaled by 2^-53; the scaling is exact.
        (self.value_at(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli draw: `true` with probability `p`.
    #[inline]
    pub fn bool_at(&self, index: u64, p: f64) -> bool {
        self.uniform_at(index) < p
    }

    /// Fair sign in `{-1.0, +1.0}`.
    #[inline]
    pub fn sign_at(&self, index: u64) -> f64 {
        if self.value_at(index) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Stream tags used by the generators; fixed so outputs stay stable.
pub mod streams {
    pub const BERNOULLI_SIGNS: u64 = 1;
    pub const FLIPS: u64 = 2;
    pub const DIMER_PARITY: u64 = 3;
    pub const DIMER_SIGNS: u64 = 4;
    pub const DIMER_EDGE: u64 = 5;
    pub const LEDRAPPIER_ROW: u64 = 6;
    pub const MEYER_OCCUPANCY: u64 = 7;
    pub const FULL_SHIFT_2D: u64 = 8;
}
