//! CSV tables. Each file starts with a `#` comment naming the software version and the spec
//! hash, then a header row. Numbers carry 9 significant digits; dB values are converted here
//! and nowhere earlier. Wall-clock times live in `timings.csv` only, so every other file is
//! bit-identical across repeated runs.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{ExperimentReport, SweepAxis};
use crate::error::{DfrcError, Result};
use crate::linalg::linear_to_db;

/// Decimal rendering with 9 significant digits, trailing zeros dropped. NaN is empty.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return String::new();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    let decimals = (8 - r.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{r:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn sweep_cell(axis: SweepAxis, v: f64) -> String {
    match axis {
        SweepAxis::Antennas => format!("{}", v as usize),
        _ => sig9(v),
    }
}

fn csv_err(e: csv::Error) -> DfrcError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => DfrcError::Io(io),
        other => DfrcError::Numerical(format!("csv: {other:?}")),
    }
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<File>,
}

impl Table {
    fn create(dir: &Path, name: &str, report: &ExperimentReport, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let mut file = File::create(&path)?;
        writeln!(
            file,
            "# dfrc-core {} spec-sha256 {}",
            env!("CARGO_PKG_VERSION"),
            report.spec.hash()
        )?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(header).map_err(csv_err)?;
        Ok(Self { path, writer })
    }

    fn row(&mut self, cells: &[String]) -> Result<()> {
        self.writer.write_record(cells).map_err(csv_err)
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

/// Writes `results.csv`, `summary.csv`, `infeasible.csv`, `timings.csv` and, when enabled,
/// one `trace_<seed>.csv` per seed.
pub fn write_tables(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let axis = report.spec.sweep.axis;
    let col = axis.column();
    let mut files = Vec::new();

    let mut t = Table::create(
        dir,
        "results.csv",
        report,
        &["scheme", "seed", col, "status", "radar_sinr_db", "min_qos_margin_db", "passes"],
    )?;
    for r in &report.rows {
        t.row(&[
            r.scheme.name().into(),
            r.seed.to_string(),
            sweep_cell(axis, r.sweep_value),
            r.status.name().into(),
            sig9(r.radar_sinr_db),
            sig9(r.min_qos_margin_db),
            if r.status.solved() { r.passes.to_string() } else { String::new() },
        ])?;
    }
    files.push(t.finish()?);

    let mut t = Table::create(
        dir,
        "summary.csv",
        report,
        &[
            "scheme",
            col,
            "trials",
            "solved",
            "excluded",
            "mean_radar_sinr_db",
            "stderr_radar_sinr_db",
            "mean_min_qos_margin_db",
            "mean_passes",
        ],
    )?;
    for s in &report.summary {
        t.row(&[
            s.scheme.name().into(),
            sweep_cell(axis, s.sweep_value),
            s.trials.to_string(),
            s.solved.to_string(),
            (s.trials - s.solved).to_string(),
            sig9(s.mean_radar_sinr_db),
            sig9(s.stderr_radar_sinr_db),
            sig9(s.mean_min_qos_margin_db),
            sig9(s.mean_passes),
        ])?;
    }
    files.push(t.finish()?);

    let mut t = Table::create(dir, "infeasible.csv", report, &["scheme", "seed", col, "status", "reason"])?;
    for r in report.rows.iter().filter(|r| !r.status.solved()) {
        t.row(&[
            r.scheme.name().into(),
            r.seed.to_string(),
            sweep_cell(axis, r.sweep_value),
            r.status.name().into(),
            r.reason.clone(),
        ])?;
    }
    files.push(t.finish()?);

    let mut t = Table::create(dir, "timings.csv", report, &["scheme", "seed", col, "wall_time_s"])?;
    for r in &report.rows {
        t.row(&[
            r.scheme.name().into(),
            r.seed.to_string(),
            sweep_cell(axis, r.sweep_value),
            sig9(r.wall_time),
        ])?;
    }
    files.push(t.finish()?);

    if report.spec.traces {
        for &seed in &report.spec.seeds {
            let name = format!("trace_{seed}.csv");
            let mut t = Table::create(
                dir,
                &name,
                report,
                &[
                    "scheme",
                    col,
                    "pass",
                    "surrogate_db",
                    "radar_sinr_db",
                    "min_qos_margin_db",
                    "modulus_violation",
                    "beamformers",
                    "ris",
                    "tx_positions",
                    "rx_positions",
                ],
            )?;
            for set in report.traces.iter().filter(|s| s.seed == seed) {
                for p in &set.trace.passes {
                    let mut cells = vec![
                        set.scheme.name().to_string(),
                        sweep_cell(axis, set.sweep_value),
                        p.pass.to_string(),
                        sig9(linear_to_db(p.surrogate)),
                        sig9(linear_to_db(p.radar_sinr)),
                        sig9(p.min_qos_margin_db),
                        sig9(p.modulus_violation),
                    ];
                    cells.extend(p.blocks.iter().map(|b| b.name().to_string()));
                    t.row(&cells)?;
                }
            }
            files.push(t.finish()?);
        }
    }
    Ok(files)
}
