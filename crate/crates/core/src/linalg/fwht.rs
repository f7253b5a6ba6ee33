use crate::error::{Error, Result};

/// In-place normalized Walsh–Hadamard transform: `v ← H v` with `H = H_d / √d`.
///
/// `H` is symmetric and orthogonal, so the transform is its own inverse and
/// preserves the Euclidean norm. Runs in `O(d log d)`.
pub fn fwht_inplace(v: &mut [f64]) -> Result<()> {
    let d = v.len();
    if d == 0 || !d.is_power_of_two() {
        return Err(Error::invalid(format!(
            "Walsh-Hadamard length must be a power of two, got {d}"
        )));
    }
    fwht_unnormalized(v);
    let s = 1.0 / (d as f64).sqrt();
    v.iter_mut().for_each(|x| *x *= s);
    Ok(())
}

/// Butterfly network computing `H_d v` without the `1/√d` scale.
pub(crate) fn fwht_unnormalized(v: &mut [f64]) {
    debug_assert!(v.len().is_power_of_two());
    let mut half = 1;
    while half < v.len() {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        half *= 2;
    }
}

/// Entry `(i, j)` of the normalized Hadamard matrix of order `d`.
#[inline]
pub fn hadamard_entry(d: usize, i: usize, j: usize) -> f64 {
    let s = 1.0 / (d as f64).sqrt();
    if (i & j).count_ones().is_multiple_of(2) {
        s
    } else {
        -s
    }
}
