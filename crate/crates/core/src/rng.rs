//! Seeded pseudorandom stream used by every randomized experiment.
//!
//! The generator is SplitMix64: the state advances by the constant
//! `0x9E3779B97F4A7C15` and each output is the state passed through the
//! finalizer
//!
//! ```text
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! (all arithmetic wrapping mod 2^64). Trial `i` of an experiment with seed
//! `s` starts from state `s ^ ((i + 1) * 0xD1B54A32D192ED03)`. Bounded draws
//! use rejection sampling so the stream is reproducible from this
//! description alone.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const TRIAL_MIX: u64 = 0xD1B5_4A32_D192_ED03;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for trial `index` of an experiment seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        Self::new(seed ^ index.wrapping_add(1).wrapping_mul(TRIAL_MIX))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, bound)`; `bound == 0` means the full 64-bit range.
    pub fn below(&mut self, bound: u64) -> u64 {
        if bound == 0 {
            return self.next_u64();
        }
        // largest multiple of `bound` that fits, exclusive
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let x = self.next_u64();
            if x <= zone {
                return x % bound;
            }
        }
    }
}
