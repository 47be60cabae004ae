//! Seed derivation and the reproducible RNG used across the crate.
//!
//! All randomness flows through ChaCha8 seeded from explicit `u64` seeds, so
//! any run is reproducible from its manifest regardless of platform or
//! thread count. Sub-seeds for parallel work (calibration replicates,
//! per-iteration null samples) are derived with [`derive_seed`] instead of
//! drawing from a shared stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream tag: per-iteration null sample for the UED estimate.
pub(crate) const STREAM_NULL_SAMPLE: u64 = 0x11;
/// Stream tag: threshold-calibration replicates.
pub(crate) const STREAM_CALIBRATION: u64 = 0x22;
/// Stream tag: UED null sample inside a calibration replicate.
pub(crate) const STREAM_CALIB_UED: u64 = 0x33;

/// SplitMix64 finalizer over `base ^ stream·golden`; decorrelates
/// (base, stream) pairs deterministically.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut z = base ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Reproducible RNG from a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_seed_is_deterministic_and_stream_sensitive() {
        assert_eq!(derive_seed(7, 1), derive_seed(7, 1));
        assert_ne!(derive_seed(7, 1), derive_seed(7, 2));
        assert_ne!(derive_seed(7, 1), derive_seed(8, 1));
    }

    #[test]
    fn seeded_rng_reproduces_stream() {
        use rand::Rng;
        let a: Vec<u64> = (0..4).map(|_| seeded_rng(42).random()).collect();
        let b: Vec<u64> = (0..4).map(|_| seeded_rng(42).random()).collect();
        assert_eq!(a, b);
    }
}
