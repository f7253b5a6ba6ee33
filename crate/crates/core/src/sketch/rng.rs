use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// ChaCha generator positioned at the start of `stream` for `seed`.
///
/// Every random quantity in a sketch is drawn from a stream chosen by its
/// row index, so values depend only on `(seed, stream, position)`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) const SIGN_STREAM: u64 = 0;
pub(crate) const SAMPLE_STREAM: u64 = 1;
pub(crate) const HASH_STREAM: u64 = 2;
pub(crate) const PERM_STREAM: u64 = 3;

/// Row `j` of a SIGN sketch: entries `±1/√r`.
pub(crate) fn sign_row(seed: u64, j: usize, out: &mut [f64]) {
    let r = out.len();
    let mag = 1.0 / (r as f64).sqrt();
    let mut rng = stream_rng(seed, j as u64);
    for chunk in out.chunks_mut(64) {
        let bits = rng.next_u64();
        for (b, v) in chunk.iter_mut().enumerate() {
            *v = if (bits >> b) & 1 == 1 { -mag } else { mag };
        }
    }
}

/// Row `j` of a GAUSSIAN sketch: entries `N(0, 1/r)`.
pub(crate) fn gaussian_row(seed: u64, j: usize, out: &mut [f64]) {
    let r = out.len();
    let scale = 1.0 / (r as f64).sqrt();
    let mut rng = stream_rng(seed, j as u64);
    for v in out.iter_mut() {
        let z: f64 = StandardNormal.sample(&mut rng);
        *v = z * scale;
    }
}
