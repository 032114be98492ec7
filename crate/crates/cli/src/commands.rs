use std::path::{Path, PathBuf};
use std::time::Instant;

use radiuslab_core::bounds::{check_comparable, evaluate, BoundReport, BoundSpec, EvalContext, TrialInputs};
use radiuslab_core::ensembles::stream_rng;
use radiuslab_core::radius::SweepConfig;
use radiuslab_core::{ComplexMatrix, C64};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::thread_pool;
use crate::report::SummaryBuilder;
use crate::trials::{ensemble_inputs, inputs_for, lemma_inputs};
use crate::{
    BoundSummary, Comparison, HarnessError, Result, RunConfig, SharpnessResult, StartResult, SuiteReport,
    TrialDifference, Witness, SCHEMA_VERSION,
};

fn evaluate_trial(config: &RunConfig, ctx: &EvalContext, specs: &[BoundSpec], trial: u64) -> Result<Vec<BoundReport>> {
    let shared = ensemble_inputs(config, trial)?;
    let mut scratch = None;
    specs
        .iter()
        .map(|spec| {
            let inputs = inputs_for(config, spec, trial, &shared, &mut scratch)?;
            Ok(evaluate(spec, inputs, ctx)?)
        })
        .collect()
}

/// Reports indexed `[trial][spec]`, in trial order whatever the pool size.
fn run_trials(config: &RunConfig, ctx: &EvalContext, specs: &[BoundSpec]) -> Result<Vec<Vec<BoundReport>>> {
    thread_pool()?.install(|| {
        (0..config.trials as u64)
            .into_par_iter()
            .map(|trial| evaluate_trial(config, ctx, specs, trial))
            .collect()
    })
}

fn regenerate(config: &RunConfig, spec: &BoundSpec, trial: u64) -> Result<TrialInputs> {
    let shared = ensemble_inputs(config, trial)?;
    if spec.id.is_lemma() {
        lemma_inputs(config, spec.id, trial, shared.s.dim())
    } else {
        Ok(shared)
    }
}

fn summarize(
    config: &RunConfig,
    ctx: &EvalContext,
    specs: &[BoundSpec],
    reports: &[Vec<BoundReport>],
) -> Result<Vec<BoundSummary>> {
    let mut builders: Vec<SummaryBuilder> = specs.iter().map(|s| SummaryBuilder::new(s.to_string())).collect();
    for (trial, row) in reports.iter().enumerate() {
        for (builder, report) in builders.iter_mut().zip(row) {
            builder.push(trial as u64, report);
        }
    }
    builders
        .into_iter()
        .zip(specs)
        .map(|(builder, spec)| {
            let witness = match builder.worst_trial() {
                Some(trial) => {
                    let inputs = regenerate(config, spec, trial)?;
                    let report = evaluate(spec, &inputs, ctx)?;
                    Some(Witness::new(trial, &inputs, &report))
                }
                None => None,
            };
            Ok(builder.finish(witness))
        })
        .collect()
}

fn echo(value: &impl Serialize) -> serde_json::Value {
    serde_json::to_value(value).expect("config serialization is infallible")
}

fn report(command: &str, config: serde_json::Value, seed: u64, started: Instant) -> SuiteReport {
    SuiteReport {
        schema: SCHEMA_VERSION,
        command: command.into(),
        config,
        seed,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        failed: false,
        bounds: Vec::new(),
        comparison: None,
        sharpness: None,
        evaluations: None,
    }
}

/// Evaluates every configured bound on `trials` ensemble draws.
pub fn verify(config: &RunConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    config.validate()?;
    let ctx = config.context();
    let reports = run_trials(config, &ctx, &config.bounds)?;
    let bounds = summarize(config, &ctx, &config.bounds, &reports)?;
    let mut out = report("verify", echo(config), config.seed, started);
    out.failed = bounds.iter().any(|b| b.failures() > 0);
    out.bounds = bounds;
    out.wall_time_seconds = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Checks per trial that `tighter`'s right side never exceeds `looser`'s.
pub fn compare(config: &RunConfig, tighter: BoundSpec, looser: BoundSpec) -> Result<SuiteReport> {
    let started = Instant::now();
    check_comparable(&tighter, &looser)?;
    let config = RunConfig {
        bounds: vec![tighter, looser],
        ..config.clone()
    };
    config.validate()?;
    let ctx = config.context();
    let reports = run_trials(&config, &ctx, &config.bounds)?;
    let bounds = summarize(&config, &ctx, &config.bounds, &reports)?;

    let mut differences = Vec::new();
    let mut worst: Option<(u64, f64)> = None;
    let mut sum = 0.0;
    for (trial, row) in reports.iter().enumerate() {
        let (a, b) = (&row[0], &row[1]);
        if !(a.applicable && b.applicable) {
            continue;
        }
        let trial = trial as u64;
        let difference = a.rhs - b.rhs;
        let scale = a.scale.max(b.scale);
        let relative = if scale > 0.0 { difference / scale } else { difference };
        if worst.is_none_or(|(_, w)| relative > w) {
            worst = Some((trial, relative));
        }
        sum += difference;
        differences.push(TrialDifference {
            trial,
            dim: regenerate_dim(&config, trial)?,
            tighter_rhs: a.rhs,
            looser_rhs: b.rhs,
            difference,
            scale,
            violation: difference > ctx.threshold(scale),
        });
    }
    let worst_witness = match worst {
        Some((trial, relative)) => {
            let inputs = regenerate(&config, &tighter, trial)?;
            let row = &reports[trial as usize];
            let (lhs, rhs) = (row[0].rhs, row[1].rhs);
            Some(Witness::with_outcome(trial, &inputs, lhs, rhs, rhs - lhs, -relative))
        }
        None => None,
    };
    let compared = differences.len();
    let violations = differences.iter().filter(|d| d.violation).count();
    let comparison = Comparison {
        tighter: tighter.to_string(),
        looser: looser.to_string(),
        compared,
        violations,
        max_relative_difference: worst.map(|(_, w)| w),
        mean_difference: (compared > 0).then(|| sum / compared as f64),
        worst_witness,
        differences,
    };
    let mut out = report("compare", echo(&config), config.seed, started);
    out.failed = violations > 0 || bounds.iter().any(|b| b.failures() > 0);
    out.bounds = bounds;
    out.comparison = Some(comparison);
    out.wall_time_seconds = started.elapsed().as_secs_f64();
    Ok(out)
}

fn regenerate_dim(config: &RunConfig, trial: u64) -> Result<usize> {
    Ok(config.dims.draw(&mut stream_rng(config.seed, trial)))
}

/// Budget of the minimal-slack search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SharpnessConfig {
    pub starts: usize,
    pub steps: usize,
    /// First perturbation size, relative to the largest entry of the operand.
    pub initial_step: f64,
    /// Step multiplier after a step that improves in neither direction.
    pub anneal: f64,
}

impl Default for SharpnessConfig {
    fn default() -> Self {
        SharpnessConfig {
            starts: 64,
            steps: 500,
            initial_step: 0.5,
            anneal: 0.9,
        }
    }
}

const SEARCH_STREAM_SALT: u64 = 0x5eed_5eed_5eed_5eed;

struct SearchState {
    s: ComplexMatrix,
    t: ComplexMatrix,
    x: Vec<C64>,
    y: Vec<C64>,
}

impl SearchState {
    fn inputs(&self) -> Result<TrialInputs> {
        Ok(TrialInputs::new(
            self.s.clone(),
            self.t.clone(),
            self.x.clone(),
            self.y.clone(),
        )?)
    }

    /// Relative slack, or `+∞` outside the bound's hypotheses.
    fn objective(&self, spec: &BoundSpec, ctx: &EvalContext) -> Result<(f64, BoundReport)> {
        let report = evaluate(spec, &self.inputs()?, ctx)?;
        let value = if report.applicable {
            report.relative_slack()
        } else {
            f64::INFINITY
        };
        Ok((value, report))
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn search_start(
    config: &RunConfig,
    ctx: &EvalContext,
    spec: &BoundSpec,
    sc: &SharpnessConfig,
    start: u64,
) -> Result<(StartResult, SearchState, BoundReport)> {
    let base = regenerate(config, spec, start)?;
    let mut state = SearchState {
        s: base.s.matrix().clone(),
        t: base.t.matrix().clone(),
        x: base.x.clone(),
        y: base.y.clone(),
    };
    let n = state.s.rows();
    let perturb_t = spec.id.uses_pair() || spec.id.is_lemma();
    let per_matrix = 2 * n * n;
    let coords = if perturb_t { 2 * per_matrix } else { per_matrix };

    let mut rng = stream_rng(config.seed ^ SEARCH_STREAM_SALT, start);
    let (initial, mut best_report) = state.objective(spec, ctx)?;
    let mut best = initial;
    let mut step = sc.initial_step;
    let mut accepted = 0;
    for _ in 0..sc.steps {
        let c = rng.random_range(0..coords);
        let on_t = c >= per_matrix;
        let k = c % per_matrix;
        let (i, j, imag) = ((k / 2) / n, (k / 2) % n, k % 2 == 1);
        let size = if on_t { state.t.max_abs() } else { state.s.max_abs() }.max(f64::MIN_POSITIVE);
        let delta = step * size * rng.random_range(0.5..1.0);
        let mut improved = false;
        for sign in [1.0, -1.0] {
            let shift = if imag {
                C64::new(0.0, sign * delta)
            } else {
                C64::new(sign * delta, 0.0)
            };
            let target = if on_t { &mut state.t } else { &mut state.s };
            let saved = target[(i, j)];
            target[(i, j)] = saved + shift;
            let (value, report) = state.objective(spec, ctx)?;
            if value < best {
                best = value;
                best_report = report;
                improved = true;
                accepted += 1;
                break;
            }
            let target = if on_t { &mut state.t } else { &mut state.s };
            target[(i, j)] = saved;
        }
        if !improved {
            step *= sc.anneal;
        }
    }
    let applicable = best.is_finite();
    let result = StartResult {
        start,
        dim: n,
        initial_relative_slack: finite(initial),
        relative_slack: finite(best),
        slack: applicable.then_some(best_report.slack),
        accepted_steps: accepted,
    };
    Ok((result, state, best_report))
}

/// Multistart coordinate search for inputs minimizing `slack / scale`.
pub fn sharpness(config: &RunConfig, spec: BoundSpec, sc: &SharpnessConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    if sc.starts == 0 || !(sc.initial_step > 0.0) || !(sc.anneal > 0.0 && sc.anneal < 1.0) {
        return Err(HarnessError::Config(format!("bad search budget {sc:?}")));
    }
    let config = RunConfig {
        bounds: vec![spec],
        ..config.clone()
    };
    config.validate()?;
    let ctx = config.context();
    let runs: Vec<(StartResult, SearchState, BoundReport)> = thread_pool()?.install(|| {
        (0..sc.starts as u64)
            .into_par_iter()
            .map(|start| search_start(&config, &ctx, &spec, sc, start))
            .collect::<Result<_>>()
    })?;

    let mut best: Option<usize> = None;
    for (k, (result, _, _)) in runs.iter().enumerate() {
        if let Some(v) = result.relative_slack {
            if best.is_none_or(|b| v < runs[b].0.relative_slack.unwrap_or(f64::INFINITY)) {
                best = Some(k);
            }
        }
    }
    let (witness, failed) = match best {
        Some(k) => {
            let (result, state, report) = &runs[k];
            (
                Some(Witness::new(result.start, &state.inputs()?, report)),
                report.is_violation(),
            )
        }
        None => (None, false),
    };
    let sharp = SharpnessResult {
        bound_id: spec.to_string(),
        starts: sc.starts,
        steps: sc.steps,
        best_start: best.map(|k| runs[k].0.start),
        best_relative_slack: best.and_then(|k| runs[k].0.relative_slack),
        best_slack: best.and_then(|k| runs[k].0.slack),
        witness,
        per_start: runs.into_iter().map(|(r, _, _)| r).collect(),
    };
    #[derive(Serialize)]
    struct Echo<'a> {
        run: &'a RunConfig,
        search: &'a SharpnessConfig,
    }
    let mut out = report(
        "sharpness",
        echo(&Echo {
            run: &config,
            search: sc,
        }),
        config.seed,
        started,
    );
    out.failed = failed;
    out.sharpness = Some(sharp);
    out.wall_time_seconds = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Inputs of a single-matrix evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct EvalConfig {
    pub matrix_path: PathBuf,
    /// Second operand for pair bounds and lemmas; `S*` when absent.
    pub other_path: Option<PathBuf>,
    #[serde(serialize_with = "crate::config::as_strings")]
    pub bounds: Vec<BoundSpec>,
    pub tol_rel: f64,
    pub sweep: SweepConfig,
}

pub(crate) fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ComplexMatrix::from_json(&text).map_err(|source| HarnessError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// One full report per bound for a matrix read from disk.
pub fn eval(config: &EvalConfig) -> Result<SuiteReport> {
    let started = Instant::now();
    if config.bounds.is_empty() {
        return Err(HarnessError::Config("no bounds selected".into()));
    }
    let ctx = EvalContext {
        sweep: config.sweep,
        tol_rel: config.tol_rel,
        ..EvalContext::default()
    };
    ctx.validate()?;
    let s = read_matrix(&config.matrix_path)?;
    let inputs = match &config.other_path {
        Some(p) => TrialInputs::pair(s, read_matrix(p)?)?,
        None => TrialInputs::single(s)?,
    };
    let evaluations = config
        .bounds
        .iter()
        .map(|spec| evaluate(spec, &inputs, &ctx))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut out = report("eval", echo(config), 0, started);
    out.failed = evaluations.iter().any(BoundReport::is_violation);
    out.evaluations = Some(evaluations);
    out.wall_time_seconds = started.elapsed().as_secs_f64();
    Ok(out)
}
