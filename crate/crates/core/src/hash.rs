//! Stable 64-bit hashing (FNV-1a) for fingerprints and cache keys.
//!
//! `std`'s default hasher is not guaranteed stable across releases, and cache
//! keys must survive on disk, so the hash is pinned here.

const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const PRIME: u64 = 0x100_0000_01b3;

pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h = OFFSET;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(PRIME);
    }
    h
}
