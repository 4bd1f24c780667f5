//! Stable seed derivation for reproducible experiment streams.
//!
//! Realizations, schemes, and inner solver runs each get their own seed
//! derived from a master seed with a fixed mixing function, so results
//! reproduce exactly regardless of execution order or parallelism.

/// Derives a child seed from `(master, salt)` with a splitmix64-style mixer.
pub fn derive(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
