use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kind::{CwMode, Sampling, SketchKind};
use super::rng::{gaussian_row, sign_row, stream_rng, HASH_STREAM, PERM_STREAM, SAMPLE_STREAM, SIGN_STREAM};
use crate::data::{DataMatrix, RowView};
use crate::error::{Error, Result};
use crate::linalg::{axpy, fwht_unnormalized, hadamard_entry, DenseMatrix};

/// Largest `d·r` that [`SketchOperator::materialize`] will allocate.
pub const MATERIALIZE_CAP: usize = 1 << 24;

/// Input dimensions generated at a time by the streamed (SIGN, GAUSSIAN) kernels.
const STREAM_CHUNK: usize = 128;

/// A data-oblivious projection `R ∈ ℝ^{d×r}`, described by `(kind, d, r, seed)`.
///
/// Derived state (sign flips, samples, hashes) is recomputed from the seed,
/// so two operators built from the same arguments apply identically.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchOperator {
    kind: SketchKind,
    d: usize,
    r: usize,
    seed: u64,
    state: State,
}

#[derive(Debug, Clone, PartialEq)]
enum State {
    Srht {
        padded: usize,
        /// Diagonal of `D`, first `d` entries (the padding is zero anyway).
        signs: Vec<f64>,
        /// Column of `D H` picked by each output coordinate.
        samples: Vec<usize>,
    },
    CountSketch {
        bucket: Vec<u32>,
        sign: Vec<f64>,
    },
    Block {
        a: usize,
        /// `a` output columns per input dimension, row-major by dimension.
        targets: Vec<u32>,
        signs: Vec<f64>,
    },
    Streamed,
}

/// Timing and sparsity of one `apply`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SketchReport {
    pub kind: SketchKind,
    pub r: usize,
    pub input_nnz: usize,
    pub output_nnz: usize,
    /// Seconds spent applying the projection.
    pub t_rp: f64,
}

/// JSON descriptor sufficient to rebuild an operator exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchDescriptor {
    pub kind: String,
    pub d: usize,
    pub r: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
}

/// Builds the operator for `(kind, d, r, seed)`.
pub fn build_sketch(kind: SketchKind, d: usize, r: usize, seed: u64) -> Result<SketchOperator> {
    SketchOperator::new(kind, d, r, seed)
}

impl SketchOperator {
    pub fn new(kind: SketchKind, d: usize, r: usize, seed: u64) -> Result<Self> {
        if d == 0 || r == 0 {
            return Err(Error::invalid(format!("sketch needs d >= 1 and r >= 1 (d={d}, r={r})")));
        }
        let kind = match kind {
            SketchKind::Cw(CwMode::Block { a: 0, .. } | CwMode::Block { q: 0, .. }) => {
                SketchKind::Cw(CwMode::block_for(r))
            }
            k => k,
        };
        let state = match kind {
            SketchKind::Srht(sampling) => build_srht(d, r, seed, sampling)?,
            SketchKind::Cw(CwMode::CountSketch) => {
                let mut rng = stream_rng(seed, HASH_STREAM);
                let mut bucket = Vec::with_capacity(d);
                let mut sign = Vec::with_capacity(d);
                for _ in 0..d {
                    bucket.push(rng.random_range(0..r) as u32);
                    sign.push(if rng.random::<bool>() { 1.0 } else { -1.0 });
                }
                State::CountSketch { bucket, sign }
            }
            SketchKind::Cw(CwMode::Block { a, q }) => build_block(d, r, seed, a, q)?,
            SketchKind::Sign | SketchKind::Gaussian => State::Streamed,
        };
        Ok(SketchOperator { kind, d, r, seed, state })
    }

    pub fn kind(&self) -> SketchKind {
        self.kind
    }

    pub fn input_dim(&self) -> usize {
        self.d
    }

    pub fn output_dim(&self) -> usize {
        self.r
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Padded dimension for SRHT, `None` otherwise.
    pub fn padded_dim(&self) -> Option<usize> {
        match &self.state {
            State::Srht { padded, .. } => Some(*padded),
            _ => None,
        }
    }

    /// SRHT column samples (indices into the padded dimension).
    pub fn srht_samples(&self) -> Option<&[usize]> {
        match &self.state {
            State::Srht { samples, .. } => Some(samples),
            _ => None,
        }
    }

    /// SRHT sign flips for the first `d` coordinates.
    pub fn srht_signs(&self) -> Option<&[f64]> {
        match &self.state {
            State::Srht { signs, .. } => Some(signs),
            _ => None,
        }
    }

    /// CountSketch `(bucket, sign)` per input dimension.
    pub fn countsketch_pairs(&self) -> Option<Vec<(usize, f64)>> {
        match &self.state {
            State::CountSketch { bucket, sign } => {
                Some(bucket.iter().zip(sign).map(|(&b, &s)| (b as usize, s)).collect())
            }
            _ => None,
        }
    }

    pub fn descriptor(&self) -> SketchDescriptor {
        let (a, q) = match self.kind {
            SketchKind::Cw(CwMode::Block { a, q }) => (Some(a), Some(q)),
            _ => (None, None),
        };
        SketchDescriptor {
            kind: self.kind.family().to_string(),
            d: self.d,
            r: self.r,
            seed: self.seed,
            mode: self.kind.mode().map(str::to_string),
            a,
            q,
        }
    }

    pub fn from_descriptor(desc: &SketchDescriptor) -> Result<Self> {
        let block = match (desc.a, desc.q) {
            (Some(a), Some(q)) => Some((a, q)),
            (None, None) => None,
            _ => return Err(Error::invalid("block descriptor needs both `a` and `q`")),
        };
        let kind = SketchKind::from_parts(&desc.kind, desc.mode.as_deref(), desc.r, block)?;
        Self::new(kind, desc.d, desc.r, desc.seed)
    }

    /// `X̃ = X R` together with timing and sparsity.
    pub fn apply(&self, x: &DataMatrix) -> Result<(DenseMatrix, SketchReport)> {
        if x.cols() != self.d {
            return Err(Error::mismatch(format!(
                "sketch expects {} input columns, data has {}",
                self.d,
                x.cols()
            )));
        }
        let start = Instant::now();
        let out = match &self.state {
            State::Srht { padded, signs, samples } => self.apply_srht(x, *padded, signs, samples),
            State::CountSketch { bucket, sign } => self.apply_rows(x, |row, out| {
                for_each_nonzero(row, |j, v| out[bucket[j] as usize] += sign[j] * v);
            }),
            State::Block { a, targets, signs } => {
                let w = 1.0 / (*a as f64).sqrt();
                self.apply_rows(x, |row, out| {
                    for_each_nonzero(row, |j, v| {
                        for s in 0..*a {
                            out[targets[j * a + s] as usize] += signs[j * a + s] * w * v;
                        }
                    });
                })
            }
            State::Streamed => self.apply_streamed(x),
        };
        let t_rp = start.elapsed().as_secs_f64();
        let output_nnz = out.as_slice().iter().filter(|v| **v != 0.0).count();
        let report = SketchReport {
            kind: self.kind,
            r: self.r,
            input_nnz: x.nnz(),
            output_nnz,
            t_rp,
        };
        Ok((out, report))
    }

    /// Explicit `R` (d×r).
    pub fn materialize(&self) -> Result<DenseMatrix> {
        let cells = self.d.saturating_mul(self.r);
        if cells > MATERIALIZE_CAP {
            return Err(Error::Capacity(format!(
                "materializing {}x{} exceeds {MATERIALIZE_CAP} entries",
                self.d, self.r
            )));
        }
        let mut m = DenseMatrix::zeros(self.d, self.r);
        match &self.state {
            State::Srht { padded, signs, samples } => {
                let scale = (*padded as f64 / self.r as f64).sqrt();
                for i in 0..self.d {
                    for (c, &k) in samples.iter().enumerate() {
                        m.set(i, c, scale * signs[i] * hadamard_entry(*padded, i, k));
                    }
                }
            }
            State::CountSketch { bucket, sign } => {
                for j in 0..self.d {
                    m.set(j, bucket[j] as usize, sign[j]);
                }
            }
            State::Block { a, targets, signs } => {
                let w = 1.0 / (*a as f64).sqrt();
                for j in 0..self.d {
                    for s in 0..*a {
                        let c = targets[j * a + s] as usize;
                        m.set(j, c, m.get(j, c) + signs[j * a + s] * w);
                    }
                }
            }
            State::Streamed => {
                for j in 0..self.d {
                    self.stream_row(j, m.row_mut(j));
                }
            }
        }
        Ok(m)
    }

    fn stream_row(&self, j: usize, out: &mut [f64]) {
        match self.kind {
            SketchKind::Sign => sign_row(self.seed, j, out),
            SketchKind::Gaussian => gaussian_row(self.seed, j, out),
            _ => unreachable!("only SIGN and GAUSSIAN are streamed"),
        }
    }

    fn apply_rows(&self, x: &DataMatrix, f: impl Fn(RowView<'_>, &mut [f64]) + Sync) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(x.rows(), self.r);
        out.as_mut_slice()
            .par_chunks_mut(self.r)
            .enumerate()
            .for_each(|(i, row)| f(x.row(i), row));
        out
    }

    fn apply_srht(&self, x: &DataMatrix, padded: usize, signs: &[f64], samples: &[usize]) -> DenseMatrix {
        // √(d/r) · (1/√d) from the normalized H collapses to 1/√r
        let scale = 1.0 / (self.r as f64).sqrt();
        self.apply_rows(x, |row, out| {
            let mut buf = vec![0.0; padded];
            for_each_nonzero(row, |j, v| buf[j] = signs[j] * v);
            fwht_unnormalized(&mut buf);
            for (o, &k) in out.iter_mut().zip(samples) {
                *o = scale * buf[k];
            }
        })
    }

    fn apply_streamed(&self, x: &DataMatrix) -> DenseMatrix {
        let (n, r, d) = (x.rows(), self.r, self.d);
        // skip generating rows of R for input columns that never occur
        let used: Vec<bool> = match x {
            DataMatrix::Dense(_) => vec![true; d],
            DataMatrix::Sparse(m) => {
                let mut u = vec![false; d];
                for i in 0..n {
                    for &c in m.row(i).0 {
                        u[c] = true;
                    }
                }
                u
            }
        };
        let mut out = vec![0.0; n * r];
        let mut block = vec![0.0; STREAM_CHUNK * r];
        let mut cursor = vec![0usize; n];
        for start in (0..d).step_by(STREAM_CHUNK) {
            let end = (start + STREAM_CHUNK).min(d);
            if !used[start..end].iter().any(|u| *u) {
                continue;
            }
            block
                .par_chunks_mut(r)
                .take(end - start)
                .enumerate()
                .for_each(|(k, row)| {
                    if used[start + k] {
                        self.stream_row(start + k, row);
                    }
                });
            out.par_chunks_mut(r)
                .zip(cursor.par_iter_mut())
                .enumerate()
                .for_each(|(i, (out_row, cur))| match x.row(i) {
                    RowView::Dense(vals) => {
                        for (k, &v) in vals[start..end].iter().enumerate() {
                            if v != 0.0 {
                                axpy(v, &block[k * r..(k + 1) * r], out_row);
                            }
                        }
                    }
                    RowView::Sparse(idx, vals) => {
                        while *cur < idx.len() && idx[*cur] < end {
                            let k = idx[*cur] - start;
                            axpy(vals[*cur], &block[k * r..(k + 1) * r], out_row);
                            *cur += 1;
                        }
                    }
                });
        }
        DenseMatrix::from_vec(n, r, out).expect("finite inputs give finite outputs")
    }
}

fn for_each_nonzero(row: RowView<'_>, mut f: impl FnMut(usize, f64)) {
    match row {
        RowView::Dense(vals) => {
            for (j, &v) in vals.iter().enumerate() {
                if v != 0.0 {
                    f(j, v);
                }
            }
        }
        RowView::Sparse(idx, vals) => {
            for (&j, &v) in idx.iter().zip(vals) {
                f(j, v);
            }
        }
    }
}

fn build_srht(d: usize, r: usize, seed: u64, sampling: Sampling) -> Result<State> {
    let padded = d.next_power_of_two();
    let mut rng = stream_rng(seed, SIGN_STREAM);
    let signs = (0..d)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect();
    let mut rng = stream_rng(seed, SAMPLE_STREAM);
    let samples = match sampling {
        Sampling::WithReplacement => (0..r).map(|_| rng.random_range(0..padded)).collect(),
        Sampling::WithoutReplacement => {
            if r > padded {
                return Err(Error::invalid(format!(
                    "sampling without replacement needs r <= padded d ({r} > {padded})"
                )));
            }
            let mut all: Vec<usize> = (0..padded).collect();
            let (picked, _) = all.partial_shuffle(&mut rng, r);
            picked.to_vec()
        }
    };
    Ok(State::Srht { padded, signs, samples })
}

fn build_block(d: usize, r: usize, seed: u64, a: usize, q: usize) -> Result<State> {
    if a == 0 || q == 0 || !r.is_multiple_of(a * q) {
        return Err(Error::invalid(format!(
            "block sparse embedding needs a·q to divide r (a={a}, q={q}, r={r})"
        )));
    }
    let v = r / (a * q);
    // P: input coordinate j moves to position perm[j]
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(&mut stream_rng(seed, PERM_STREAM));
    // h, Φ and D are drawn per permuted position
    let mut rng = stream_rng(seed, HASH_STREAM);
    let mut pos_targets = vec![0u32; d * a];
    let mut pos_signs = vec![0.0; d * a];
    for p in 0..d {
        let bucket = rng.random_range(0..q);
        for s in 0..a {
            let row = rng.random_range(0..v);
            pos_targets[p * a + s] = (bucket * v * a + s * v + row) as u32;
            pos_signs[p * a + s] = if rng.random::<bool>() { 1.0 } else { -1.0 };
        }
    }
    let mut targets = vec![0u32; d * a];
    let mut signs = vec![0.0; d * a];
    for j in 0..d {
        let p = perm[j];
        targets[j * a..(j + 1) * a].copy_from_slice(&pos_targets[p * a..(p + 1) * a]);
        signs[j * a..(j + 1) * a].copy_from_slice(&pos_signs[p * a..(p + 1) * a]);
    }
    Ok(State::Block { a, targets, signs })
}
