use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::{
    ExperimentArgs, InputArgs, PredictArgs, RecommendArgs, SketchArgs, SolverArgs, SynthArgs, TrainArgs, VerifyArgs,
    EXIT_BOUND_VIOLATION, EXIT_OK,
};
use crate::data::DataMatrix;
use crate::error::{Error, Result};
use crate::experiments::{
    generate_regression, generate_synthetic, metrics, run_experiment, sketch_seed, RegressionSpec, SyntheticSpec,
    PRESET_C_REGRESSION, PRESET_C_SYNTHETIC,
};
use crate::geometry::{
    data_discrepancy, verify_combined_bound, verify_margin_bound, verify_radius_bound, BoundCheck,
};
use crate::io::{load_dataset, write_dense_csv, write_libsvm, DataFormat, RunConfig};
use crate::sketch::{build_sketch, recommend_r, SketchDescriptor, SketchKind, SketchOperator};
use crate::svm::{train_svc, train_svr, SolverParams, SvcProblem, SvmModel, SvrProblem, Task};

fn load(data: &InputArgs, seed: u64) -> Result<(DataMatrix, Vec<f64>)> {
    match (&data.input, data.preset) {
        (Some(path), _) => load_dataset(path, data.format),
        (None, Some(preset)) => generate_synthetic(&preset.spec(seed)),
        (None, None) => Err(Error::invalid("give --input FILE or --preset D1|D2|D3")),
    }
}

fn write_data(path: &Path, x: &DataMatrix, y: &[f64]) -> Result<()> {
    match DataFormat::from_path(path) {
        DataFormat::Csv => write_dense_csv(path, x, y),
        DataFormat::Libsvm => write_libsvm(path, x, y),
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn default_c(task: Task) -> f64 {
    match task {
        Task::Classification => PRESET_C_SYNTHETIC,
        Task::Regression => PRESET_C_REGRESSION,
    }
}

fn fit(task: Task, x: &DataMatrix, y: &[f64], c: f64, tube_epsilon: f64, params: SolverParams) -> Result<SvmModel> {
    match task {
        Task::Classification => train_svc(SvcProblem { x, y, c }, params),
        Task::Regression => train_svr(SvrProblem { x, y, c, tube_epsilon }, params),
    }
}

fn solver_params(tol: f64, max_iter: u64) -> Result<SolverParams> {
    let params = SolverParams { tol, max_iter, record_trace: false };
    params.validate()?;
    Ok(params)
}

pub(super) fn sketch(a: SketchArgs, seed: u64) -> Result<u8> {
    let (x, y) = load(&a.data, seed)?;
    let op = build_sketch(a.kind, x.cols(), a.r, seed)?;
    let (xs, report) = op.apply(&x)?;
    write_data(&a.out, &xs.into(), &y)?;
    let desc_path = a.descriptor.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".sketch.json");
        PathBuf::from(p)
    });
    write_json(&desc_path, &op.descriptor())?;
    println!("{}", serde_json::to_string(&report)?);
    Ok(EXIT_OK)
}

pub(super) fn train(a: TrainArgs, seed: u64) -> Result<u8> {
    let (x, y) = load(&a.data, seed)?;
    let SolverArgs { task, c, tube_epsilon, tol, max_iter } = a.solver;
    let model = fit(task, &x, &y, c.unwrap_or(default_c(task)), tube_epsilon, solver_params(tol, max_iter)?)?;
    write_json(&a.out, &model)?;
    eprintln!(
        "trained on {}x{}: gamma={:?} objective={:?} iterations={} converged={}",
        x.rows(),
        x.cols(),
        model.gamma,
        model.objective,
        model.iterations,
        model.converged
    );
    Ok(EXIT_OK)
}

pub(super) fn predict(a: PredictArgs, seed: u64) -> Result<u8> {
    let model: SvmModel = serde_json::from_str(&fs::read_to_string(&a.model)?)?;
    let (mut x, y) = load(&a.data, seed)?;
    if let Some(path) = &a.descriptor {
        let desc: SketchDescriptor = serde_json::from_str(&fs::read_to_string(path)?)?;
        x = SketchOperator::from_descriptor(&desc)?.apply(&x)?.0.into();
    }
    let pred = model.predict(&x)?;
    let mut text = String::new();
    for p in &pred {
        text.push_str(&format!("{p:?}\n"));
    }
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Ok(m) = metrics(&pred, &y, model.kind) {
        eprintln!("{}", serde_json::to_string(&m)?);
    }
    Ok(EXIT_OK)
}

pub(super) fn experiment(a: ExperimentArgs, seed: Option<u64>) -> Result<u8> {
    let from_file = a.config.is_some();
    let mut cfg = match &a.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if a.data.input.is_some() || a.data.preset.is_some() {
        cfg.input = a.data.input.clone();
        cfg.preset = a.data.preset;
    }
    if a.data.format.is_some() {
        cfg.format = a.data.format;
    }
    if a.out.is_some() {
        cfg.output = a.out.clone();
    }
    let e = &mut cfg.experiment;
    if let Some(task) = a.task {
        e.task = task;
        if !from_file && a.c.is_none() {
            e.c = default_c(task);
        }
    }
    if let Some(v) = a.kinds {
        e.kinds = v;
    }
    if let Some(v) = a.r_values {
        e.r_values = v;
    }
    if let Some(v) = a.c {
        e.c = v;
    }
    if let Some(v) = a.tube_epsilon {
        e.tube_epsilon = v;
    }
    if let Some(v) = a.tol {
        e.tol = v;
    }
    if let Some(v) = a.folds {
        e.folds = v;
    }
    if let Some(v) = a.cv_reps {
        e.cv_reps = v;
    }
    if let Some(v) = a.seed_reps {
        e.seed_reps = v;
    }
    if a.no_full {
        e.include_full = false;
    }
    if let Some(s) = seed {
        e.seed = s;
    }
    cfg.validate()?;

    let data = InputArgs { input: cfg.input.clone(), format: cfg.format, preset: cfg.preset };
    let (x, y) = load(&data, cfg.experiment.seed)?;
    let report = run_experiment(&x, &y, &cfg.experiment)?;
    match &cfg.output {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("report.csv"), report.to_csv())?;
            fs::write(dir.join("timings.csv"), report.timings_csv())?;
            fs::write(dir.join("runs.jsonl"), report.raw_jsonl()?)?;
            write_json(&dir.join("report.json"), &report)?;
            write_json(&dir.join("config.json"), &cfg)?;
            eprintln!("wrote {} cells to {}", report.cells.len(), dir.display());
        }
        None => print!("{}", report.to_csv()),
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Satisfied,
    Violated,
    Vacuous,
}

/// One line of `verify` output.
#[derive(Debug, Serialize)]
struct VerifyRecord {
    kind: SketchKind,
    r: usize,
    seed: u64,
    bound: &'static str,
    status: Status,
    e_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<BoundCheck>,
}

impl VerifyRecord {
    fn from_outcome(op: &SketchOperator, bound: &'static str, e_norm: f64, outcome: Result<BoundCheck>) -> Result<Self> {
        let (status, check) = match outcome {
            Ok(c) if c.satisfied => (Status::Satisfied, Some(c)),
            Ok(c) => (Status::Violated, Some(c)),
            Err(Error::BoundVacuous { .. }) => (Status::Vacuous, None),
            Err(e) => return Err(e),
        };
        let e_norm = check.as_ref().and_then(|c| c.e_norm).unwrap_or(e_norm);
        Ok(VerifyRecord { kind: op.kind(), r: op.output_dim(), seed: op.seed(), bound, status, e_norm, check })
    }
}

pub(super) fn verify(a: VerifyArgs, seed: u64) -> Result<u8> {
    let (x, y) = load(&a.data, seed)?;
    let c = a.c.unwrap_or(default_c(a.task));
    let params = solver_params(a.tol, a.max_iter)?;
    let full = fit(a.task, &x, &y, c, a.tube_epsilon, params)?;
    let jobs: Vec<(SketchKind, usize)> =
        a.kinds.iter().flat_map(|&k| (0..a.seeds).map(move |s| (k, s))).collect();
    let per_job: Vec<Vec<VerifyRecord>> = jobs
        .par_iter()
        .map(|&(kind, s)| {
            let op = build_sketch(kind, x.cols(), a.r, sketch_seed(seed, s))?;
            let (disc, _) = data_discrepancy(&x, &op)?;
            let xs: DataMatrix = op.apply(&x)?.0.into();
            let sketched = fit(a.task, &xs, &y, c, a.tube_epsilon, params)?;
            let radius = verify_radius_bound(&x, &op, a.delta)?;
            let margin = verify_margin_bound(&full, &sketched, disc.e_norm);
            let combined = verify_combined_bound(
                &full,
                &sketched,
                &radius.full,
                &radius.sketched,
                disc.e_norm,
                radius.e_b.e_norm,
            );
            let eps = disc.e_norm.max(radius.e_b.e_norm);
            Ok(vec![
                VerifyRecord::from_outcome(&op, "margin", disc.e_norm, margin)?,
                VerifyRecord::from_outcome(&op, "radius", radius.e_b.e_norm, Ok(radius.check))?,
                VerifyRecord::from_outcome(&op, "combined", eps, combined)?,
            ])
        })
        .collect::<Result<_>>()?;

    let records: Vec<VerifyRecord> = per_job.into_iter().flatten().collect();
    let mut text = String::new();
    for rec in &records {
        text.push_str(&serde_json::to_string(rec)?);
        text.push('\n');
    }
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    let count = |s: Status| records.iter().filter(|r| r.status == s).count();
    let violated = count(Status::Violated);
    eprintln!(
        "{} satisfied, {} vacuous, {} violated",
        count(Status::Satisfied),
        count(Status::Vacuous),
        violated
    );
    Ok(if violated > 0 { EXIT_BOUND_VIOLATION } else { EXIT_OK })
}

pub(super) fn recommend(a: RecommendArgs) -> Result<u8> {
    let needs_d = |k: SketchKind| matches!(k, SketchKind::Srht(_) | SketchKind::Sign);
    let eval = |k: SketchKind| -> Result<usize> {
        let d = match a.d {
            Some(d) => d,
            None if needs_d(k) => return Err(Error::invalid(format!("--d is required for {k}"))),
            None => 1,
        };
        recommend_r(k, a.rho, d, a.eps, a.delta)
    };
    match a.kind {
        Some(k) => println!("{}", eval(k)?),
        None => {
            for k in SketchKind::ALL {
                println!("{k} {}", eval(k)?);
            }
        }
    }
    Ok(EXIT_OK)
}

pub(super) fn synth(a: SynthArgs, seed: u64) -> Result<u8> {
    let (n, d, mu, sigma) = match (a.preset, a.n, a.d) {
        (Some(p), _, _) => p.shape(),
        (None, Some(n), Some(d)) => (n, d, a.mu, a.sigma),
        _ => return Err(Error::invalid("give --preset or both --n and --d")),
    };
    let (x, y) = if a.regression {
        generate_regression(&RegressionSpec { n, d, rank: a.rank, noise: a.noise, seed })?
    } else {
        generate_synthetic(&SyntheticSpec { n, d, mu, sigma, seed })?
    };
    write_data(&a.out, &x, &y)?;
    eprintln!("wrote {n}x{d} to {}", a.out.display());
    Ok(EXIT_OK)
}
