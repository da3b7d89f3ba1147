//! Counter-based randomness for reproducible Monte Carlo.
//!
//! Every random decision is a pure hash of (master seed, replica, time step,
//! position, draw index), so trajectories are bit-identical regardless of
//! execution order, partitioning, or thread count. Noise masks are produced
//! 64 sites at a time with the digit-comparison construction, which realizes
//! P(bit) = threshold / 2^32 exactly and couples monotonically in the
//! threshold when streams are shared.

use serde::{Deserialize, Serialize};

/// Splitmix64 finalizer; full avalanche on 64 bits.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
fn chain(h: u64, v: u64) -> u64 {
    mix64(h ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Identifies one independent random stream: a master seed plus the replica
/// index. The time step enters per draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub replica: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, replica: u64) -> Self {
        RngSpec { master_seed, replica }
    }

    #[inline]
    fn base(&self, time: u64) -> u64 {
        // Non-zero pad so the all-zero key does not map to 0.
        let h = chain(0x243f_6a88_85a3_08d3 ^ self.master_seed, self.replica);
        chain(h, time)
    }

    /// One uniform word for (time, word position, digit index).
    #[inline]
    pub fn word_draw(&self, time: u64, word_index: u64, digit: u32) -> u64 {
        chain(chain(self.base(time), word_index), digit as u64)
    }

    /// One uniform word for (time, site index).
    #[inline]
    pub fn site_draw(&self, time: u64, site_index: u64) -> u64 {
        chain(chain(self.base(time), 0x5151_5151_5151_5151), site_index)
    }

    /// 64 independent Bernoulli(threshold / 2^32) bits for one word position.
    ///
    /// Digits of the threshold are consumed most-significant-last so that a
    /// digit's random word depends only on its absolute index; thresholds
    /// with trailing zero digits then use a prefix of the same draws, which
    /// makes shared-stream couplings monotone in the threshold.
    #[inline]
    pub fn bernoulli_mask(&self, time: u64, word_index: u64, threshold: u64) -> u64 {
        debug_assert!(threshold <= 1 << 32);
        if threshold >= 1 << 32 {
            return !0;
        }
        if threshold == 0 {
            return 0;
        }
        let lowest = threshold.trailing_zeros(); // digits below are zero
        let mut mask = 0u64;
        for bit in lowest..32 {
            let r = self.word_draw(time, word_index, bit);
            mask = if threshold >> bit & 1 == 1 { r | mask } else { r & mask };
        }
        mask
    }
}

/// Probability as a 32-bit fixed-point threshold over 2^32. Exact for dyadic
/// probabilities such as 1/4; otherwise rounded to the nearest multiple of
/// 2^-32.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prob32(pub u64);

impl Prob32 {
    pub fn from_f64(p: f64) -> Self {
        assert!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
        let scaled = (p * (1u64 << 32) as f64).round();
        Prob32((scaled as u64).min(1 << 32))
    }

    pub fn as_f64(&self) -> f64 {
        self.0 as f64 / (1u64 << 32) as f64
    }

    pub fn is_certain(&self) -> bool {
        self.0 == 1 << 32
    }
}

/// Probability as a 64-bit threshold for per-site draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prob64(pub u128);

impl Prob64 {
    pub fn from_f64(p: f64) -> Self {
        assert!((0.0..=1.0).contains(&p), "probability {p} outside [0,1]");
        let scaled = (p * 2f64.powi(64)).round();
        Prob64((scaled as u128).min(1u128 << 64))
    }

    #[inline]
    pub fn accepts(&self, draw: u64) -> bool {
        (draw as u128) < self.0
    }
}
