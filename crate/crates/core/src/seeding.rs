//! Deterministic random streams keyed by (seed, subject, replicate).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a; stable across platforms and releases, unlike `DefaultHasher`.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325_u64;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Stream used when drawing a synthetic subject's responses. Simulation
/// replicates use streams `0..n_sims`.
pub(crate) const SYNTH_STREAM: u64 = u64::MAX;
/// Stream used when drawing a synthetic subject's true parameters.
pub(crate) const TRUTH_STREAM: u64 = u64::MAX - 1;

/// Generator for one (seed, subject, stream) triple. Results do not depend on
/// the order in which subjects or replicates are processed.
pub(crate) fn subject_rng(seed: u64, subject: &str, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(subject.as_bytes()).rotate_left(17));
    rng.set_stream(stream);
    rng
}
