use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{classification_error, mse, squared_correlation};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::sketch::{build_sketch, SketchKind};
use crate::svm::{train_svc_with_gram, train_svr_with_gram, SolverParams, SvcProblem, SvmModel, SvrProblem, Task};

pub const PRESET_C_SYNTHETIC: f64 = 1000.0;
pub const PRESET_C_TECHTC: f64 = 500.0;
pub const PRESET_C_REGRESSION: f64 = 1.0;

/// A cross-validation grid over sketch kinds and target dimensions.
/// Missing JSON fields take their [`Default`] values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub task: Task,
    pub kinds: Vec<SketchKind>,
    pub r_values: Vec<usize>,
    /// Also evaluate the unsketched data (the `full` row).
    pub include_full: bool,
    #[serde(rename = "C")]
    pub c: f64,
    pub tube_epsilon: f64,
    pub tol: f64,
    pub max_iter: u64,
    pub folds: usize,
    pub cv_reps: usize,
    pub seed_reps: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            task: Task::Classification,
            kinds: SketchKind::ALL.to_vec(),
            r_values: vec![256, 512, 1024],
            include_full: true,
            c: PRESET_C_SYNTHETIC,
            tube_epsilon: 0.0,
            tol: 1e-6,
            max_iter: 10_000_000,
            folds: 10,
            cv_reps: 10,
            seed_reps: 10,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.folds < 2 {
            return Err(Error::invalid(format!("need at least 2 folds, got {}", self.folds)));
        }
        if n < self.folds {
            return Err(Error::invalid(format!("{n} rows cannot fill {} folds", self.folds)));
        }
        if self.r_values.contains(&0) {
            return Err(Error::invalid("sketch dimensions must be at least 1"));
        }
        if self.cv_reps == 0 || self.seed_reps == 0 {
            return Err(Error::invalid("repetition counts must be at least 1"));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::invalid(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !self.include_full && (self.kinds.is_empty() || self.r_values.is_empty()) {
            return Err(Error::invalid("experiment has no cells"));
        }
        Ok(())
    }

    fn solver(&self) -> SolverParams {
        SolverParams { tol: self.tol, max_iter: self.max_iter, record_trace: false }
    }
}

/// One train/evaluate run on one fold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// `full` or the sketch kind name.
    pub kind: String,
    pub r: usize,
    pub seed_rep: usize,
    pub cv_rep: usize,
    pub fold: usize,
    /// Set when the fold was skipped (single-class training set).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metrics: BTreeMap<String, f64>,
    pub t_rp: f64,
    pub t_run: f64,
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Stat { mean, std })
    }
}

/// Aggregates for one (kind, r) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub kind: String,
    pub r: usize,
    pub runs: usize,
    pub skipped: usize,
    pub metrics: BTreeMap<String, Stat>,
    pub timings: BTreeMap<String, Stat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub task: Task,
    pub n: usize,
    pub d: usize,
    pub cells: Vec<CellSummary>,
    #[serde(skip)]
    pub raw: Vec<RunRecord>,
}

impl ExperimentReport {
    pub fn cell(&self, kind: &str, r: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.kind == kind && c.r == r)
    }

    pub fn full(&self) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.kind == FULL)
    }

    /// `kind,r,metric,mean,std`, timings excluded so the output depends only
    /// on data, configuration and seeds.
    pub fn to_csv(&self) -> String {
        self.csv_of(|c| &c.metrics)
    }

    /// Same layout as [`to_csv`](Self::to_csv) for `t_rp` and `t_run`.
    pub fn timings_csv(&self) -> String {
        self.csv_of(|c| &c.timings)
    }

    fn csv_of(&self, pick: impl Fn(&CellSummary) -> &BTreeMap<String, Stat>) -> String {
        let mut out = String::from("kind,r,metric,mean,std\n");
        for c in &self.cells {
            for (name, s) in pick(c) {
                let _ = writeln!(out, "{},{},{},{:?},{:?}", c.kind, c.r, name, s.mean, s.std);
            }
        }
        out
    }

    /// Raw per-run log, one JSON object per line.
    pub fn raw_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for rec in &self.raw {
            out.push_str(&serde_json::to_string(rec)?);
            out.push('\n');
        }
        Ok(out)
    }
}

pub const FULL: &str = "full";

/// Metric names used in reports.
pub mod metric {
    pub const EPS_IN: &str = "eps_in";
    pub const EPS_OUT: &str = "eps_out";
    pub const GAMMA: &str = "gamma";
    pub const MSE: &str = "mse";
    pub const MSE_OUT: &str = "mse_out";
    pub const BETA: &str = "beta";
    pub const T_RP: &str = "t_rp";
    pub const T_RUN: &str = "t_run";
}

/// Seeded shuffle then contiguous slicing; depends only on `(seed, cv_rep)`
/// so every cell sees the same partitions.
pub fn cv_partition(n: usize, folds: usize, seed: u64, cv_rep: usize) -> Vec<Vec<usize>> {
    let mut idx: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1 + cv_rep as u64);
    idx.shuffle(&mut rng);
    (0..folds).map(|f| idx[f * n / folds..(f + 1) * n / folds].to_vec()).collect()
}

/// Seed of the `rep`-th projection matrix.
pub fn sketch_seed(seed: u64, rep: usize) -> u64 {
    seed.wrapping_add((rep as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs every `(kind, r, seed_rep, cv_rep, fold)` combination and aggregates.
pub fn run_experiment(x: &DataMatrix, y: &[f64], cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let n = x.rows();
    if y.len() != n {
        return Err(Error::mismatch(format!("{n} rows but {} targets", y.len())));
    }
    cfg.validate(n)?;
    x.check_finite()?;
    let partitions: Vec<Vec<Vec<usize>>> =
        (0..cfg.cv_reps).map(|rep| cv_partition(n, cfg.folds, cfg.seed, rep)).collect();

    let mut raw = Vec::new();
    let mut cells = Vec::new();
    if cfg.include_full {
        let start = Instant::now();
        let gram = x.gram();
        let t_gram = start.elapsed().as_secs_f64();
        let runs = run_folds(x, y, &gram, &partitions, cfg, FULL, x.cols(), 0, 0.0, t_gram)?;
        cells.push(summarize(FULL, x.cols(), &runs));
        raw.extend(runs);
    }
    for &kind in &cfg.kinds {
        for &r in &cfg.r_values {
            let mut runs = Vec::new();
            for rep in 0..cfg.seed_reps {
                let op = build_sketch(kind, x.cols(), r, sketch_seed(cfg.seed, rep))?;
                let (xs, report) = op.apply(x)?;
                let start = Instant::now();
                let xs: DataMatrix = xs.into();
                let gram = xs.gram();
                let t_gram = start.elapsed().as_secs_f64();
                let name = kind.to_string();
                runs.extend(run_folds(&xs, y, &gram, &partitions, cfg, &name, r, rep, report.t_rp, t_gram)?);
            }
            cells.push(summarize(&kind.to_string(), r, &runs));
            raw.extend(runs);
        }
    }
    Ok(ExperimentReport { task: cfg.task, n, d: x.cols(), cells, raw })
}

#[allow(clippy::too_many_arguments)]
fn run_folds(
    x: &DataMatrix,
    y: &[f64],
    gram: &DenseMatrix,
    partitions: &[Vec<Vec<usize>>],
    cfg: &ExperimentConfig,
    kind: &str,
    r: usize,
    seed_rep: usize,
    t_rp: f64,
    t_gram: f64,
) -> Result<Vec<RunRecord>> {
    let jobs: Vec<(usize, usize)> = (0..partitions.len())
        .flat_map(|c| (0..cfg.folds).map(move |f| (c, f)))
        .collect();
    jobs.par_iter()
        .map(|&(cv_rep, fold)| {
            let test = &partitions[cv_rep][fold];
            let train: Vec<usize> = partitions[cv_rep]
                .iter()
                .enumerate()
                .filter(|(f, _)| *f != fold)
                .flat_map(|(_, p)| p.iter().copied())
                .collect();
            let mut rec = RunRecord {
                kind: kind.to_string(),
                r,
                seed_rep,
                cv_rep,
                fold,
                skipped: None,
                metrics: BTreeMap::new(),
                t_rp,
                t_run: t_rp,
            };
            match evaluate_fold(x, y, gram, &train, test, cfg) {
                Ok((metrics, train_time)) => {
                    rec.metrics = metrics;
                    rec.t_run = t_rp + t_gram + train_time;
                }
                Err(Error::Degenerate(msg)) => rec.skipped = Some(msg),
                Err(e) => return Err(e),
            }
            Ok(rec)
        })
        .collect()
}

fn evaluate_fold(
    x: &DataMatrix,
    y: &[f64],
    gram: &DenseMatrix,
    train: &[usize],
    test: &[usize],
    cfg: &ExperimentConfig,
) -> Result<(BTreeMap<String, f64>, f64)> {
    let xt = x.select_rows(train);
    let yt: Vec<f64> = train.iter().map(|&i| y[i]).collect();
    let kt = DenseMatrix::from_fn(train.len(), train.len(), |a, b| gram.get(train[a], train[b]));
    let model: SvmModel = match cfg.task {
        Task::Classification => train_svc_with_gram(SvcProblem { x: &xt, y: &yt, c: cfg.c }, &kt, cfg.solver())?,
        Task::Regression => train_svr_with_gram(
            SvrProblem { x: &xt, y: &yt, c: cfg.c, tube_epsilon: cfg.tube_epsilon },
            &kt,
            cfg.solver(),
        )?,
    };
    let xv = x.select_rows(test);
    let yv: Vec<f64> = test.iter().map(|&i| y[i]).collect();
    let pin = model.predict(&xt)?;
    let pout = model.predict(&xv)?;
    let mut m = BTreeMap::new();
    if let Some(g) = model.gamma {
        m.insert(metric::GAMMA.to_string(), g);
    }
    match cfg.task {
        Task::Classification => {
            m.insert(metric::EPS_IN.to_string(), classification_error(&pin, &yt));
            m.insert(metric::EPS_OUT.to_string(), classification_error(&pout, &yv));
        }
        Task::Regression => {
            m.insert(metric::MSE.to_string(), mse(&pin, &yt));
            m.insert(metric::MSE_OUT.to_string(), mse(&pout, &yv));
            m.insert(metric::BETA.to_string(), squared_correlation(&pin, &yt)?);
        }
    }
    Ok((m, model.train_time))
}

fn summarize(kind: &str, r: usize, runs: &[RunRecord]) -> CellSummary {
    let ok: Vec<&RunRecord> = runs.iter().filter(|r| r.skipped.is_none()).collect();
    let mut values: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for rec in &ok {
        for (k, v) in &rec.metrics {
            values.entry(k.clone()).or_default().push(*v);
        }
    }
    let metrics = values.iter().filter_map(|(k, v)| Stat::of(v).map(|s| (k.clone(), s))).collect();
    let t_rp: Vec<f64> = ok.iter().map(|r| r.t_rp).collect();
    let t_run: Vec<f64> = ok.iter().map(|r| r.t_run).collect();
    let mut timings = BTreeMap::new();
    for (name, v) in [(metric::T_RP, t_rp), (metric::T_RUN, t_run)] {
        if let Some(s) = Stat::of(&v) {
            timings.insert(name.to_string(), s);
        }
    }
    CellSummary {
        kind: kind.to_string(),
        r,
        runs: ok.len(),
        skipped: runs.len() - ok.len(),
        metrics,
        timings,
    }
}
