//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Numeric arguments run a subset.

#[path = "common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::{gaussian_matrix, hadamard_naive, median, rng, svc_oracle, svr_oracle};
use rand::Rng;
use rayon::prelude::*;
use rpsvm::data::DataMatrix;
use rpsvm::experiments::{
    center_columns, generate_regression, generate_synthetic, metric, pca_features, run_experiment, ExperimentConfig,
    Preset, RegressionSpec, PRESET_C_SYNTHETIC,
};
use rpsvm::geometry::{margin_multiplier, spectral_discrepancy, verify_margin_bound, verify_radius_bound};
use rpsvm::linalg::{fwht_inplace, norm2, svd_thin, DenseMatrix, SparseMatrix, DEFAULT_RANK_TOL};
use rpsvm::sketch::{build_sketch, SketchKind};
use rpsvm::svm::{train_svc, train_svr, SolverParams, SvcProblem, SvmModel, SvrProblem};
use rpsvm::Error;

const SOLVER_OBJECTIVE_TOL: f64 = 1e-6;
const ORACLE_GAP: f64 = 1e-8;
const ORACLE_ITERS: usize = 2_000_000;
const ORACLE_SMO_TOL: f64 = 1e-12;
const FWHT_TOL: f64 = 1e-12;
const MATERIALIZE_TOL: f64 = 1e-10;
const BOUND_SOLVER_TOL: f64 = 1e-8;
const MEB_DELTA: f64 = 0.01;
/// Frozen from a 600-seed Monte-Carlo run with explicitly formed `R`
/// (ρ = 8, d = 1024, r = 256): median 0.316 for both kinds, standard
/// deviation of a 30-seed median 0.012; threshold is median + 3 sd, rounded up.
const DISCREPANCY_R256_MAX: f64 = 0.36;
const CW_SPEEDUP_MIN: f64 = 5.0;
const PCA_GRAM_TOL: f64 = 1e-8;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

// 1
fn solver_oracle() -> Outcome {
    let instance = |seed: u64| {
        let mut g = rng(seed);
        let n = g.random_range(2..=12);
        let d = g.random_range(1..=5);
        let x = gaussian_matrix(&mut g, n, d);
        let mut y: Vec<f64> = (0..n).map(|_| if g.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
        y[0] = 1.0;
        y[1] = -1.0;
        let c = [0.1, 1.0, 1000.0][g.random_range(0..3)];
        let targets: Vec<f64> = (0..n).map(|_| g.random_range(-2.0..2.0)).collect();
        let tube = g.random_range(0.0..0.5);
        (x, y, c, targets, tube)
    };
    let params = SolverParams::with_tol(ORACLE_SMO_TOL);
    let diffs: Vec<Result<(f64, f64), String>> = (0..200u64)
        .into_par_iter()
        .map(|seed| {
            let (x, y, c, targets, tube) = instance(77_000 + seed);
            let xm = DataMatrix::from(x.clone());
            let oc = svc_oracle(&x, &y, c, ORACLE_GAP, ORACLE_ITERS);
            let or = svr_oracle(&x, &targets, c, tube, ORACLE_GAP, ORACLE_ITERS);
            if oc.gap() > ORACLE_GAP || or.gap() > ORACLE_GAP {
                return Err(format!("seed {seed}: oracle not certified"));
            }
            let mc = train_svc(SvcProblem { x: &xm, y: &y, c }, params).map_err(|e| e.to_string())?;
            let mr = train_svr(SvrProblem { x: &xm, y: &targets, c, tube_epsilon: tube }, params)
                .map_err(|e| e.to_string())?;
            Ok(((mc.objective - oc.dual).abs(), (mr.objective - or.dual).abs()))
        })
        .collect();
    let mut worst = (0.0f64, 0.0f64);
    for d in &diffs {
        match d {
            Ok((a, b)) => worst = (worst.0.max(*a), worst.1.max(*b)),
            Err(e) => return Outcome::new(false, e.clone()),
        }
    }
    Outcome::new(
        worst.0 <= SOLVER_OBJECTIVE_TOL && worst.1 <= SOLVER_OBJECTIVE_TOL,
        format!("200+200 instances, worst |Δobj| svc {:.2e} svr {:.2e}", worst.0, worst.1),
    )
}

// 2
fn fwht() -> Outcome {
    let mut g = rng(2);
    let mut worst_naive = 0.0f64;
    for log in 1..=6 {
        let d = 1usize << log;
        let h = hadamard_naive(d);
        for _ in 0..50 {
            let v: Vec<f64> = (0..d).map(|_| g.random_range(-1.0..1.0)).collect();
            let expect = h.matvec(&v).unwrap();
            let mut got = v.clone();
            fwht_inplace(&mut got).unwrap();
            worst_naive = got.iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(worst_naive, f64::max);
        }
    }
    let (mut worst_inv, mut worst_norm) = (0.0f64, 0.0f64);
    for log in 0..=16 {
        let d = 1usize << log;
        let v: Vec<f64> = (0..d).map(|_| g.random_range(-1.0..1.0)).collect();
        let mut w = v.clone();
        fwht_inplace(&mut w).unwrap();
        worst_norm = worst_norm.max((norm2(&w) - norm2(&v)).abs() / norm2(&v));
        fwht_inplace(&mut w).unwrap();
        worst_inv = v.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(worst_inv, f64::max);
    }
    Outcome::new(
        worst_naive <= FWHT_TOL && worst_inv <= FWHT_TOL && worst_norm <= FWHT_TOL,
        format!("naive {worst_naive:.1e}, involution {worst_inv:.1e}, relative norm {worst_norm:.1e}"),
    )
}

// 3
fn sketch_consistency() -> Outcome {
    let mut g = rng(3);
    let mut worst = 0.0f64;
    for kind in SketchKind::ALL {
        for seed in 0..10u64 {
            let d = g.random_range(2..=64);
            let r = g.random_range(1..=32);
            let x = gaussian_matrix(&mut g, 6, d);
            let rows: Vec<Vec<(usize, f64)>> = (0..6)
                .map(|i| (0..d).filter(|j| (i + j) % 3 == 0).map(|j| (j, x.get(i, j))).collect())
                .collect();
            let sparse = SparseMatrix::from_rows(d, &rows).unwrap();
            let op = build_sketch(kind, d, r, seed).unwrap();
            let big_r = op.materialize().unwrap();
            for xm in [DataMatrix::from(x), DataMatrix::from(sparse)] {
                let expect = xm.to_dense().matmul(&big_r).unwrap();
                worst = worst.max(op.apply(&xm).unwrap().0.max_abs_diff(&expect));
            }
        }
    }
    Outcome::new(worst <= MATERIALIZE_TOL, format!("4 kinds x 10 seeds, worst |XR - apply| {worst:.1e}"))
}

#[derive(Default)]
struct ChainTally {
    holds: usize,
    violated: usize,
    vacuous: usize,
    e: Vec<f64>,
    worst: Option<String>,
}

impl ChainTally {
    fn add(&mut self, kind: SketchKind, seed: u64, e: f64, check: rpsvm::Result<rpsvm::geometry::BoundCheck>) {
        self.e.push(e);
        match check {
            Ok(c) if c.satisfied => self.holds += 1,
            Ok(c) => {
                self.violated += 1;
                self.worst.get_or_insert(format!("{kind} seed {seed}: {:.4e} > {:.4e}", c.lhs, c.rhs));
            }
            Err(Error::BoundVacuous { .. }) => self.vacuous += 1,
            Err(e) => {
                self.violated += 1;
                self.worst.get_or_insert(format!("{kind} seed {seed}: {e}"));
            }
        }
    }

    fn outcome(self, total: usize) -> Outcome {
        let pass = self.holds == total;
        let mut detail = format!(
            "{}/{total} hold, {} violated, {} vacuous (e >= 1), median e {:.3}",
            self.holds,
            self.violated,
            self.vacuous,
            median(self.e)
        );
        if let Some(w) = self.worst {
            detail.push_str(&format!("; first violation {w}"));
        }
        Outcome::new(pass, detail)
    }
}

/// Trains on the full data once, then on 4 kinds × `seeds` sketches, and
/// checks `γ̃² ≥ (1 − e/(1 − e)) γ²` for each.
fn margin_chain(
    x: &DataMatrix,
    r: usize,
    seeds: u64,
    train: impl Fn(&DataMatrix) -> rpsvm::Result<SvmModel> + Sync,
) -> Outcome {
    let full = match train(x) {
        Ok(m) => m,
        Err(e) => return Outcome::new(false, format!("full model: {e}")),
    };
    let v = svd_thin(&x.to_dense(), DEFAULT_RANK_TOL).unwrap().v;
    let jobs: Vec<(SketchKind, u64)> =
        SketchKind::ALL.iter().flat_map(|&k| (0..seeds).map(move |s| (k, s))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(kind, seed)| {
            let op = build_sketch(kind, x.cols(), r, seed).unwrap();
            let e = spectral_discrepancy(&v, &op).unwrap().e_norm;
            let check = margin_multiplier(e).and_then(|_| {
                let xs: DataMatrix = op.apply(x)?.0.into();
                verify_margin_bound(&full, &train(&xs)?, e)
            });
            (kind, seed, e, check)
        })
        .collect();
    let mut tally = ChainTally::default();
    for (kind, seed, e, check) in results {
        tally.add(kind, seed, e, check);
    }
    tally.outcome(jobs.len())
}

// 4
fn classification_margin_chain() -> Outcome {
    let (x, y) = generate_synthetic(&Preset::D1.spec(0)).unwrap();
    let params = SolverParams::with_tol(BOUND_SOLVER_TOL);
    margin_chain(&x, 512, 50, |xm| train_svc(SvcProblem { x: xm, y: &y, c: PRESET_C_SYNTHETIC }, params))
}

fn low_rank(seed: u64, n: usize, d: usize, k: usize) -> DenseMatrix {
    let mut g = rng(seed);
    gaussian_matrix(&mut g, n, k).matmul(&gaussian_matrix(&mut g, k, d)).unwrap()
}

// 5
fn radius_chain() -> Outcome {
    let x: DataMatrix = low_rank(5, 100, 256, 10).into();
    let jobs: Vec<(SketchKind, u64)> = SketchKind::ALL.iter().flat_map(|&k| (0..50u64).map(move |s| (k, s))).collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(kind, seed)| {
            let op = build_sketch(kind, 256, 128, seed).unwrap();
            let rc = verify_radius_bound(&x, &op, MEB_DELTA);
            let e = rc.as_ref().map(|c| c.e_b.e_norm).unwrap_or(f64::NAN);
            (kind, seed, e, rc.map(|c| c.check))
        })
        .collect();
    let mut tally = ChainTally::default();
    for (kind, seed, e, check) in results {
        tally.add(kind, seed, e, check);
    }
    tally.outcome(jobs.len())
}

// 6
fn discrepancy_decay() -> Outcome {
    let (d, rho) = (1024, 8);
    let mut g = rng(6);
    let v = svd_thin(&gaussian_matrix(&mut g, d, rho), DEFAULT_RANK_TOL).unwrap().u;
    let rs = [8, 16, 32, 64, 128, 256];
    let mut pass = true;
    let mut detail = Vec::new();
    for kind in SketchKind::ALL {
        let meds: Vec<f64> = rs
            .iter()
            .map(|&r| {
                let e: Vec<f64> = (0..30u64)
                    .into_par_iter()
                    .map(|s| spectral_discrepancy(&v, &build_sketch(kind, d, r, s).unwrap()).unwrap().e_norm)
                    .collect();
                median(e)
            })
            .collect();
        let monotone = meds.windows(2).all(|w| w[1] <= w[0]);
        let capped = match kind {
            SketchKind::Gaussian | SketchKind::Sign => meds[rs.len() - 1] <= DISCREPANCY_R256_MAX,
            _ => true,
        };
        pass &= monotone && capped;
        let shown: Vec<String> = meds.iter().map(|m| format!("{m:.3}")).collect();
        detail.push(format!("{kind} [{}]", shown.join(" ")));
    }
    Outcome::new(pass, format!("medians over r=8..256: {}; cap {DISCREPANCY_R256_MAX}", detail.join(", ")))
}

// 7
fn grid_trend() -> Outcome {
    let cfg = ExperimentConfig::default();
    let mut pass = true;
    let mut notes = Vec::new();
    for preset in Preset::ALL {
        let (x, y) = generate_synthetic(&preset.spec(0)).unwrap();
        let report = match run_experiment(&x, &y, &cfg) {
            Ok(r) => r,
            Err(e) => return Outcome::new(false, format!("{}: {e}", preset.name())),
        };
        let full_in = report.full().map(|c| c.metrics[metric::EPS_IN].mean);
        if full_in != Some(0.0) {
            pass = false;
            notes.push(format!("{} full eps_in {full_in:?}", preset.name()));
        }
        let rs: Vec<usize> = cfg.r_values.iter().copied().filter(|&r| r <= x.cols()).collect();
        for kind in &cfg.kinds {
            let series = |m: &str| -> Vec<f64> {
                rs.iter().map(|&r| report.cell(&kind.to_string(), r).unwrap().metrics[m].mean).collect()
            };
            let (eo, gm) = (series(metric::EPS_OUT), series(metric::GAMMA));
            if !eo.windows(2).all(|w| w[1] <= w[0]) {
                pass = false;
                let s: Vec<String> = eo.iter().map(|v| format!("{v:.2}")).collect();
                notes.push(format!("{} {kind} eps_out [{}]", preset.name(), s.join(" ")));
            }
            if !gm.windows(2).all(|w| w[1] >= w[0]) {
                pass = false;
                let s: Vec<String> = gm.iter().map(|v| format!("{v:.3}")).collect();
                notes.push(format!("{} {kind} gamma [{}]", preset.name(), s.join(" ")));
            }
        }
    }
    if notes.is_empty() {
        notes.push("eps_out non-increasing and gamma non-decreasing everywhere".into());
    }
    Outcome::new(pass, format!("non-monotone: {}", notes.join("; ")))
}

// 8
fn input_sparsity() -> Outcome {
    let (n, d, density) = (2000, 20_000, 0.002);
    let mut g = rng(8);
    let per_row = (d as f64 * density) as usize;
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|_| {
            let mut cols = rand::seq::index::sample(&mut g, d, per_row).into_vec();
            cols.sort_unstable();
            cols.into_iter().map(|j| (j, g.random_range(0.5..1.5))).collect()
        })
        .collect();
    let x: DataMatrix = SparseMatrix::from_rows(d, &rows).unwrap().into();
    let best_time = |kind: SketchKind| {
        let op = build_sketch(kind, d, 1024, 1).unwrap();
        (0..3).map(|_| op.apply(&x).unwrap().1.t_rp).fold(f64::INFINITY, f64::min)
    };
    let (t_cw, t_sign) = (best_time(SketchKind::CW), best_time(SketchKind::Sign));
    let (y, _) = build_sketch(SketchKind::CW, d, 1024, 1).unwrap().apply(&x).unwrap();
    let rows_ok = (0..n).all(|i| y.row(i).iter().filter(|v| **v != 0.0).count() <= rows[i].len());
    let ratio = t_sign / t_cw;
    Outcome::new(
        ratio >= CW_SPEEDUP_MIN && rows_ok,
        format!("t_rp cw {:.2} ms, sign {:.2} ms, ratio {ratio:.1}; per-row nnz bound {}", 1e3 * t_cw, 1e3 * t_sign, rows_ok),
    )
}

// 9
fn pca_gram() -> Outcome {
    let mut g = rng(9);
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let k = g.random_range(1..=8);
        let x: DataMatrix = low_rank(900 + i, 30, 80, k).into();
        let xc = center_columns(&x);
        let rank = svd_thin(&xc, DEFAULT_RANK_TOL).unwrap().rank;
        let z = pca_features(&x, rank).unwrap();
        worst = worst.max(xc.gram().max_abs_diff(&z.gram()));
    }
    Outcome::new(worst <= PCA_GRAM_TOL, format!("20 matrices, worst |XcXcT - ZZT| {worst:.1e}"))
}

// 10
fn regression_margin_chain() -> Outcome {
    let noise = 0.1;
    let spec = RegressionSpec { n: 100, d: 1024, rank: Some(10), noise, seed: 10 };
    let (x, y) = generate_regression(&spec).unwrap();
    let params = SolverParams::with_tol(BOUND_SOLVER_TOL);
    margin_chain(&x, 512, 20, |xm| train_svr(SvrProblem { x: xm, y: &y, c: 1000.0, tube_epsilon: noise }, params))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("solver matches QP oracle", solver_oracle),
        ("FWHT correctness", fwht),
        ("sketch equals X times materialized R", sketch_consistency),
        ("classification margin chain on D1", classification_margin_chain),
        ("enclosing-ball radius chain", radius_chain),
        ("discrepancy decays with r", discrepancy_decay),
        ("grid trend on D1-D3", grid_trend),
        ("CW input-sparsity speed", input_sparsity),
        ("PCA keeps the centered Gram", pca_gram),
        ("regression margin chain", regression_margin_chain),
    ];
    // numeric arguments select criteria, e.g. `cargo test --test acceptance -- 4 10`
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Outcome::new(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        if !outcome.pass {
            failed += 1;
        }
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{tag} {:>2} {name} ({secs:.1}s): {}", i + 1, outcome.detail);
    }
    println!("{} passed, {failed} failed", ran - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
