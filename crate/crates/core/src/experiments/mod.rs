//! Seeded Monte-Carlo experiments: every (scheme, sweep point, seed) combination is one
//! independent trial. Trials run on a small thread pool; results are sorted before they are
//! written, so the output files do not depend on scheduling.

pub mod output;
pub mod plot;
pub mod spec;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use web_time::Instant;

use crate::baselines::SchemeTag;
use crate::bcd::{initialize, run, trial_rng, BcdConfig, IterationTrace, RunStatus, CHANNEL_STREAM, INIT_STREAM, LAYOUT_STREAM};
use crate::config::ScenarioConfig;
use crate::error::{DfrcError, Result};
use crate::geometry::sample_channels;
use crate::linalg::linear_to_db;

pub use spec::{preset, ExperimentSpec, Scale, Sweep, SweepAxis, PRESETS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TrialStatus {
    Converged,
    MaxOuter,
    Stalled,
    /// No initial point met the QoS targets.
    Infeasible,
    /// A numerical or layout error ended the trial.
    Failed,
}

impl TrialStatus {
    pub fn name(self) -> &'static str {
        match self {
            TrialStatus::Converged => "converged",
            TrialStatus::MaxOuter => "max_outer",
            TrialStatus::Stalled => "stalled",
            TrialStatus::Infeasible => "infeasible",
            TrialStatus::Failed => "failed",
        }
    }

    pub fn solved(self) -> bool {
        matches!(self, TrialStatus::Converged | TrialStatus::MaxOuter | TrialStatus::Stalled)
    }
}

/// Outcome of one trial. The numeric fields are NaN/0 unless the trial was solved.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub scheme: SchemeTag,
    pub seed: u64,
    pub sweep_value: f64,
    pub status: TrialStatus,
    pub radar_sinr_db: f64,
    pub min_qos_margin_db: f64,
    /// Passes to converge.
    pub passes: usize,
    pub wall_time: f64,
    /// Why an unsolved trial ended.
    pub reason: String,
}

/// Runs one trial: channels and the initial RIS depend on the seed only, so every scheme
/// sees the same realization.
pub fn run_trial(
    cfg: &ScenarioConfig,
    opts: &BcdConfig,
    scheme: SchemeTag,
    seed: u64,
) -> (ResultRow, Option<IterationTrace>) {
    let start = Instant::now();
    let mut row = ResultRow {
        scheme,
        seed,
        sweep_value: f64::NAN,
        status: TrialStatus::Failed,
        radar_sinr_db: f64::NAN,
        min_qos_margin_db: f64::NAN,
        passes: 0,
        wall_time: 0.0,
        reason: String::new(),
    };
    let ch = sample_channels(&mut trial_rng(seed, CHANNEL_STREAM), cfg);
    let init = initialize(
        &ch,
        cfg,
        opts,
        scheme,
        &mut trial_rng(seed, INIT_STREAM),
        &mut trial_rng(seed, LAYOUT_STREAM),
    );
    let result = init.and_then(|vars| run(&ch, cfg, opts, scheme, vars));
    let trace = match result {
        Ok(out) => {
            let last = out.trace.passes.last().expect("a run records its initial point");
            row.status = match out.status {
                RunStatus::Converged => TrialStatus::Converged,
                RunStatus::MaxOuter => TrialStatus::MaxOuter,
                RunStatus::Stalled => TrialStatus::Stalled,
            };
            row.radar_sinr_db = linear_to_db(last.radar_sinr);
            row.min_qos_margin_db = last.min_qos_margin_db;
            row.passes = out.passes;
            Some(out.trace)
        }
        Err(DfrcError::Infeasible(why)) => {
            row.status = TrialStatus::Infeasible;
            row.reason = why;
            None
        }
        Err(e) => {
            row.reason = e.to_string();
            None
        }
    };
    row.wall_time = start.elapsed().as_secs_f64();
    (row, trace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceSet {
    pub scheme: SchemeTag,
    pub seed: u64,
    pub sweep_value: f64,
    pub trace: IterationTrace,
}

/// Mean over the solved trials of one (scheme, sweep point).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scheme: SchemeTag,
    pub sweep_value: f64,
    pub trials: usize,
    pub solved: usize,
    pub mean_radar_sinr_db: f64,
    /// Standard error of the mean; NaN with fewer than two solved trials.
    pub stderr_radar_sinr_db: f64,
    pub mean_min_qos_margin_db: f64,
    pub mean_passes: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub spec: ExperimentSpec,
    /// Sorted by scheme, sweep point, seed.
    pub rows: Vec<ResultRow>,
    pub traces: Vec<TraceSet>,
    pub summary: Vec<SummaryRow>,
}

impl ExperimentReport {
    pub fn solved(&self) -> usize {
        self.rows.iter().filter(|r| r.status.solved()).count()
    }

    /// Summary row of one (scheme, sweep point).
    pub fn summary_at(&self, scheme: SchemeTag, sweep_value: f64) -> Option<&SummaryRow> {
        self.summary.iter().find(|s| s.scheme == scheme && s.sweep_value == sweep_value)
    }

    /// Final radar SINR of one trial, if solved.
    pub fn radar_sinr_db(&self, scheme: SchemeTag, sweep_value: f64, seed: u64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.sweep_value == sweep_value && r.seed == seed && r.status.solved())
            .map(|r| r.radar_sinr_db)
    }
}

/// Worker count: `DFRC_THREADS` if set, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("DFRC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every trial of `spec` in memory.
pub fn execute(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let points = spec.sweep.points(&spec.scenario);
    let mut jobs = Vec::new();
    for &scheme in &spec.schemes {
        for (p, &value) in points.iter().enumerate() {
            for &seed in &spec.seeds {
                jobs.push((scheme, p, value, seed));
            }
        }
    }
    let configs: Vec<ScenarioConfig> = points.iter().map(|&v| spec.sweep.apply(&spec.scenario, v)).collect();

    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..worker_count().min(jobs.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(scheme, p, value, seed)) = jobs.get(i) else { break };
                let (mut row, trace) = run_trial(&configs[p], &spec.solver, scheme, seed);
                row.sweep_value = value;
                done.lock().expect("no worker panics while holding the lock").push((i, row, trace));
            });
        }
    });
    let mut done = done.into_inner().expect("workers have finished");
    // job order is (scheme, point, seed): sorting by index restores it
    done.sort_by_key(|d| d.0);

    let mut rows = Vec::with_capacity(done.len());
    let mut traces = Vec::new();
    for (_, row, trace) in done {
        if let Some(trace) = trace {
            traces.push(TraceSet {
                scheme: row.scheme,
                seed: row.seed,
                sweep_value: row.sweep_value,
                trace,
            });
        }
        rows.push(row);
    }
    let summary = summarize(&rows, &spec.schemes, &points);
    Ok(ExperimentReport {
        spec: spec.clone(),
        rows,
        traces,
        summary,
    })
}

fn summarize(rows: &[ResultRow], schemes: &[SchemeTag], points: &[f64]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for &scheme in schemes {
        for &value in points {
            let trials: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.sweep_value == value)
                .collect();
            let solved: Vec<&&ResultRow> = trials.iter().filter(|r| r.status.solved()).collect();
            let n = solved.len() as f64;
            let mean = |f: &dyn Fn(&ResultRow) -> f64| solved.iter().map(|r| f(r)).sum::<f64>() / n;
            let m = mean(&|r| r.radar_sinr_db);
            let stderr = if solved.len() > 1 {
                let var = solved.iter().map(|r| (r.radar_sinr_db - m).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                f64::NAN
            };
            out.push(SummaryRow {
                scheme,
                sweep_value: value,
                trials: trials.len(),
                solved: solved.len(),
                mean_radar_sinr_db: m,
                stderr_radar_sinr_db: stderr,
                mean_min_qos_margin_db: mean(&|r| r.min_qos_margin_db),
                mean_passes: mean(&|r| r.passes as f64),
            });
        }
    }
    out
}

/// Runs `spec` and writes every output file into `spec.output`. Returns the report and the
/// written paths.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<(ExperimentReport, Vec<PathBuf>)> {
    let report = execute(spec)?;
    let files = write_outputs(&report, &spec.output)?;
    Ok((report, files))
}

/// Parses the spec file at `path`, then runs it.
pub fn run_experiment_file(path: &Path, overrides: &[(&str, &str)]) -> Result<(ExperimentReport, Vec<PathBuf>)> {
    let spec = validate_spec(path, overrides)?;
    run_experiment(&spec)
}

/// Reads and validates a spec file, filling defaults.
pub fn validate_spec(path: &Path, overrides: &[(&str, &str)]) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DfrcError::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
    ExperimentSpec::parse_with(&text, overrides)
}

pub fn write_outputs(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = output::write_tables(report, dir)?;
    files.extend(plot::write_plots(report, dir)?);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny(text: &str) -> ExperimentSpec {
        ExperimentSpec::parse(&format!("scale = desk\nsolver.max_outer = 3\n{text}")).unwrap()
    }

    #[test]
    fn one_trial_gives_one_row() {
        let spec = tiny("seeds = [4]\nschemes = [fpa]");
        let report = execute(&spec).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.summary.len(), 1);
        assert_eq!(report.rows[0].sweep_value, 39.0);
        assert_eq!(report.traces.len(), report.solved());
    }

    #[test]
    fn rows_are_ordered_and_thread_independent() {
        let spec = tiny("seeds = 0..3\nschemes = [fpa, rpa]\nsweep.axis = qos\nsweep.values = [8, 4]");
        std::env::set_var("DFRC_THREADS", "3");
        let a = execute(&spec).unwrap();
        std::env::set_var("DFRC_THREADS", "1");
        let b = execute(&spec).unwrap();
        std::env::remove_var("DFRC_THREADS");
        let key = |r: &ResultRow| (r.scheme, r.sweep_value.to_bits(), r.seed);
        assert_eq!(a.rows.iter().map(key).collect::<Vec<_>>(), b.rows.iter().map(key).collect::<Vec<_>>());
        assert_eq!(a.rows.len(), 12);
        assert_eq!(a.rows[0].scheme, SchemeTag::Fpa);
        assert_eq!(a.rows[0].sweep_value, 8.0);
        for (x, y) in a.rows.iter().zip(&b.rows) {
            assert_eq!(x.radar_sinr_db.to_bits(), y.radar_sinr_db.to_bits());
        }
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn infeasible_trials_are_excluded_from_means() {
        let spec = tiny("seeds = 0..2\nschemes = [fpa]\nscenario.qos_db = 60");
        let report = execute(&spec).unwrap();
        assert_eq!(report.solved(), 0);
        assert!(report.rows.iter().all(|r| r.status == TrialStatus::Infeasible && !r.reason.is_empty()));
        let s = &report.summary[0];
        assert_eq!((s.trials, s.solved), (2, 0));
        assert!(s.mean_radar_sinr_db.is_nan());
    }
}
