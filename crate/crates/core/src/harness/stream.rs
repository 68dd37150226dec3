use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type handed to generators and resamplers.
pub type Stream = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer, a bijective nonlinear mixer on 64-bit words.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent, reproducible stream for replicate `index` under `master_seed`.
///
/// The ChaCha key is expanded from the mixed master seed; the replicate index
/// selects the ChaCha stream, so distinct indices never share a keystream.
pub fn derive_stream(master_seed: u64, index: u64) -> Stream {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}
