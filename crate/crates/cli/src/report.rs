use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use radiuslab_core::bounds::{BoundReport, TrialInputs};
use radiuslab_core::{ComplexMatrix, C64};
use serde::{Deserialize, Serialize};

use crate::{HarnessError, OutputFormat, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A trial's inputs and outcome, replayable through `eval`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: u64,
    pub dim: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub relative_slack: f64,
    pub s: ComplexMatrix,
    pub t: ComplexMatrix,
    pub x: Vec<[f64; 2]>,
    pub y: Vec<[f64; 2]>,
}

impl Witness {
    pub(crate) fn new(trial: u64, inputs: &TrialInputs, report: &BoundReport) -> Self {
        Self::with_outcome(
            trial,
            inputs,
            report.lhs,
            report.rhs,
            report.slack,
            report.relative_slack(),
        )
    }

    pub(crate) fn with_outcome(
        trial: u64,
        inputs: &TrialInputs,
        lhs: f64,
        rhs: f64,
        slack: f64,
        relative_slack: f64,
    ) -> Self {
        let pairs = |v: &[C64]| v.iter().map(|z| [z.re, z.im]).collect();
        Witness {
            trial,
            dim: inputs.s.dim(),
            lhs,
            rhs,
            slack,
            relative_slack,
            s: inputs.s.matrix().clone(),
            t: inputs.t.matrix().clone(),
            x: pairs(&inputs.x),
            y: pairs(&inputs.y),
        }
    }
}

/// Aggregate of one bound over a run. Slack statistics cover applicable trials only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub bound_id: String,
    pub trials: usize,
    pub applicable_count: usize,
    pub pass_count: usize,
    pub min_slack: Option<f64>,
    pub mean_slack: Option<f64>,
    pub min_relative_slack: Option<f64>,
    /// Applicable trials where a `*_holds` detail flag was 0.
    pub flag_failures: BTreeMap<String, usize>,
    pub worst_witness: Option<Witness>,
}

impl BoundSummary {
    pub fn failures(&self) -> usize {
        self.applicable_count - self.pass_count
    }
}

/// Streaming accumulator; feed trials in index order.
#[derive(Debug)]
pub(crate) struct SummaryBuilder {
    bound_id: String,
    trials: usize,
    applicable: usize,
    passed: usize,
    slack_sum: f64,
    min_slack: f64,
    worst: Option<(u64, f64)>,
    flag_failures: BTreeMap<String, usize>,
}

impl SummaryBuilder {
    pub(crate) fn new(bound_id: String) -> Self {
        SummaryBuilder {
            bound_id,
            trials: 0,
            applicable: 0,
            passed: 0,
            slack_sum: 0.0,
            min_slack: f64::INFINITY,
            worst: None,
            flag_failures: BTreeMap::new(),
        }
    }

    pub(crate) fn push(&mut self, trial: u64, report: &BoundReport) {
        self.trials += 1;
        if !report.applicable {
            return;
        }
        self.applicable += 1;
        if report.holds {
            self.passed += 1;
        }
        self.slack_sum += report.slack;
        self.min_slack = self.min_slack.min(report.slack);
        let rel = report.relative_slack();
        if self.worst.is_none_or(|(_, w)| rel < w) {
            self.worst = Some((trial, rel));
        }
        for (name, value) in &report.details {
            if name.ends_with("_holds") && *value == 0.0 {
                *self.flag_failures.entry(name.clone()).or_default() += 1;
            }
        }
    }

    pub(crate) fn worst_trial(&self) -> Option<u64> {
        self.worst.map(|(t, _)| t)
    }

    pub(crate) fn finish(self, worst_witness: Option<Witness>) -> BoundSummary {
        let any = self.applicable > 0;
        BoundSummary {
            bound_id: self.bound_id,
            trials: self.trials,
            applicable_count: self.applicable,
            pass_count: self.passed,
            min_slack: any.then_some(self.min_slack),
            mean_slack: any.then(|| self.slack_sum / self.applicable as f64),
            min_relative_slack: self.worst.map(|(_, w)| w),
            flag_failures: self.flag_failures,
            worst_witness,
        }
    }
}

/// Per-trial right-hand-side difference `tighter − looser`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialDifference {
    pub trial: u64,
    pub dim: usize,
    pub tighter_rhs: f64,
    pub looser_rhs: f64,
    pub difference: f64,
    pub scale: f64,
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub tighter: String,
    pub looser: String,
    /// Trials where both bounds were applicable.
    pub compared: usize,
    pub violations: usize,
    pub max_relative_difference: Option<f64>,
    pub mean_difference: Option<f64>,
    pub worst_witness: Option<Witness>,
    pub differences: Vec<TrialDifference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartResult {
    pub start: u64,
    pub dim: usize,
    /// `None` while no applicable point has been seen.
    pub initial_relative_slack: Option<f64>,
    pub relative_slack: Option<f64>,
    pub slack: Option<f64>,
    pub accepted_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub bound_id: String,
    pub starts: usize,
    pub steps: usize,
    pub best_start: Option<u64>,
    pub best_relative_slack: Option<f64>,
    pub best_slack: Option<f64>,
    pub witness: Option<Witness>,
    pub per_start: Vec<StartResult>,
}

/// Versioned output of every command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: u64,
    pub wall_time_seconds: f64,
    /// An applicable trial failed, a comparison was violated, or a search found a counterexample.
    pub failed: bool,
    pub bounds: Vec<BoundSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharpness: Option<SharpnessResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<Vec<BoundReport>>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    bound_id: &'a str,
    trials: usize,
    applicable_count: usize,
    pass_count: usize,
    min_slack: Option<f64>,
    mean_slack: Option<f64>,
    min_relative_slack: Option<f64>,
    worst_trial: Option<u64>,
}

#[derive(Serialize)]
struct EvalRow<'a> {
    bound_id: &'a str,
    lhs: f64,
    rhs: f64,
    slack: f64,
    scale: f64,
    holds: bool,
    applicable: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// Flat table: per-trial differences for `compare`, per-start results for
    /// `sharpness`, bound reports for `eval`, per-bound summaries otherwise.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(cmp) = &self.comparison {
            for row in &cmp.differences {
                w.serialize(row)?;
            }
        } else if let Some(sharp) = &self.sharpness {
            for row in &sharp.per_start {
                w.serialize(row)?;
            }
        } else if let Some(evals) = &self.evaluations {
            for r in evals {
                w.serialize(EvalRow {
                    bound_id: &r.bound_id,
                    lhs: r.lhs,
                    rhs: r.rhs,
                    slack: r.slack,
                    scale: r.scale,
                    holds: r.holds,
                    applicable: r.applicable,
                })?;
            }
        } else {
            for b in &self.bounds {
                w.serialize(SummaryRow {
                    bound_id: &b.bound_id,
                    trials: b.trials,
                    applicable_count: b.applicable_count,
                    pass_count: b.pass_count,
                    min_slack: b.min_slack,
                    mean_slack: b.mean_slack,
                    min_relative_slack: b.min_relative_slack,
                    worst_trial: b.worst_witness.as_ref().map(|w| w.trial),
                })?;
            }
        }
        w.flush().map_err(|e| HarnessError::Csv(e.into()))?;
        Ok(())
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Json => {
                let mut text = self.to_json();
                text.push('\n');
                Ok(text.into_bytes())
            }
            OutputFormat::Csv => {
                let mut buf = Vec::new();
                self.write_csv(&mut buf)?;
                Ok(buf)
            }
        }
    }

    /// Writes to `path`, or stdout when absent.
    pub fn write(&self, path: Option<&Path>, format: OutputFormat) -> Result<()> {
        let bytes = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, bytes).map_err(|source| HarnessError::Io {
                path: p.to_path_buf(),
                source,
            }),
            None => std::io::stdout().write_all(&bytes).map_err(|source| HarnessError::Io {
                path: "<stdout>".into(),
                source,
            }),
        }
    }

    /// One line per bound for terminal output.
    pub fn summary_lines(&self) -> Vec<String> {
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.3e}"));
        let mut lines: Vec<String> = self
            .bounds
            .iter()
            .map(|b| {
                format!(
                    "{:<22} applicable {:>6}/{:<6} failed {:>5}  min rel slack {}",
                    b.bound_id,
                    b.applicable_count,
                    b.trials,
                    b.failures(),
                    fmt(b.min_relative_slack)
                )
            })
            .collect();
        if let Some(c) = &self.comparison {
            lines.push(format!(
                "{} <= {}: compared {}, violations {}, max rel difference {}",
                c.tighter,
                c.looser,
                c.compared,
                c.violations,
                fmt(c.max_relative_difference)
            ));
        }
        if let Some(s) = &self.sharpness {
            lines.push(format!(
                "{}: best rel slack {} over {} starts",
                s.bound_id,
                fmt(s.best_relative_slack),
                s.starts
            ));
        }
        if let Some(evals) = &self.evaluations {
            for r in evals {
                let status = match (r.applicable, r.holds) {
                    (false, _) => "n/a",
                    (true, true) => "ok",
                    (true, false) => "FAIL",
                };
                lines.push(format!(
                    "{:<22} lhs {:.12e} rhs {:.12e} slack {:.3e} {status}",
                    r.bound_id, r.lhs, r.rhs, r.slack
                ));
            }
        }
        lines
    }
}
