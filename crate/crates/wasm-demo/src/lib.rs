//! Browser bindings: run one trial and watch it converge, or compare every scheme on the
//! same channel realization. Results are returned as JSON strings.

use dfrc_core::baselines::SchemeTag;
use dfrc_core::bcd::{initialize, run, trial_rng, BcdConfig, RunStatus, CHANNEL_STREAM, INIT_STREAM, LAYOUT_STREAM};
use dfrc_core::config::ScenarioConfig;
use dfrc_core::experiments::{ExperimentSpec, Scale};
use dfrc_core::geometry::{sample_channels, Position2D};
use dfrc_core::linalg::{db_to_linear, dbm_to_watts, linear_to_db};
use dfrc_core::DfrcError;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Pass {
    surrogate_db: f64,
    radar_sinr_db: f64,
    min_qos_margin_db: f64,
}

#[derive(Serialize)]
pub struct TrialView {
    scheme: &'static str,
    /// converged, max_outer, stalled, infeasible or failed
    status: &'static str,
    reason: String,
    radar_sinr_db: Option<f64>,
    min_qos_margin_db: Option<f64>,
    passes: Vec<Pass>,
    /// Antenna positions in wavelengths.
    tx: Vec<[f64; 2]>,
    rx: Vec<[f64; 2]>,
    ris_phase_deg: Vec<f64>,
    half_region: f64,
    min_distance: f64,
}

fn scenario(power_dbm: f64, qos_db: f64) -> Result<ScenarioConfig, String> {
    let mut cfg = ExperimentSpec::defaults(Scale::Desk).scenario;
    cfg.power_budget = dbm_to_watts(power_dbm);
    cfg.qos = db_to_linear(qos_db);
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn in_wavelengths(pos: &[Position2D], wavelength: f64) -> Vec<[f64; 2]> {
    pos.iter().map(|p| [p.x / wavelength, p.y / wavelength]).collect()
}

/// One trial at desk scale (K = 2, N = 4, M = 16).
pub fn trial(scheme: SchemeTag, seed: u64, power_dbm: f64, qos_db: f64) -> Result<TrialView, String> {
    let cfg = scenario(power_dbm, qos_db)?;
    let opts = BcdConfig::default();
    let ch = sample_channels(&mut trial_rng(seed, CHANNEL_STREAM), &cfg);
    let mut view = TrialView {
        scheme: scheme.name(),
        status: "failed",
        reason: String::new(),
        radar_sinr_db: None,
        min_qos_margin_db: None,
        passes: Vec::new(),
        tx: Vec::new(),
        rx: Vec::new(),
        ris_phase_deg: Vec::new(),
        half_region: cfg.half_region() / cfg.wavelength,
        min_distance: cfg.min_distance / cfg.wavelength,
    };
    let outcome = initialize(
        &ch,
        &cfg,
        &opts,
        scheme,
        &mut trial_rng(seed, INIT_STREAM),
        &mut trial_rng(seed, LAYOUT_STREAM),
    )
    .and_then(|init| run(&ch, &cfg, &opts, scheme, init));
    match outcome {
        Ok(r) => {
            view.status = match r.status {
                RunStatus::Converged => "converged",
                RunStatus::MaxOuter => "max_outer",
                RunStatus::Stalled => "stalled",
            };
            view.passes = r
                .trace
                .passes
                .iter()
                .map(|p| Pass {
                    surrogate_db: linear_to_db(p.surrogate),
                    radar_sinr_db: linear_to_db(p.radar_sinr),
                    min_qos_margin_db: p.min_qos_margin_db,
                })
                .collect();
            let last = view.passes.last().expect("the initial point is recorded");
            view.radar_sinr_db = Some(last.radar_sinr_db);
            view.min_qos_margin_db = Some(last.min_qos_margin_db);
            view.tx = in_wavelengths(&r.vars.tx, cfg.wavelength);
            view.rx = in_wavelengths(&r.vars.rx, cfg.wavelength);
            view.ris_phase_deg = r.vars.ris.iter().map(|v| v.arg().to_degrees()).collect();
        }
        Err(DfrcError::Infeasible(why)) => {
            view.status = "infeasible";
            view.reason = why;
        }
        Err(e) => view.reason = e.to_string(),
    }
    Ok(view)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, JsError> {
    serde_json::to_string(value).map_err(|e| JsError::new(&e.to_string()))
}

/// Runs `scheme` (proposed, fpa, rpa, random_ris or gas) and returns a [`TrialView`].
#[wasm_bindgen]
pub fn run_trial(scheme: &str, seed: u32, power_dbm: f64, qos_db: f64) -> Result<String, JsError> {
    let tag: SchemeTag = scheme.parse().map_err(|e: DfrcError| JsError::new(&e.to_string()))?;
    let view = trial(tag, seed.into(), power_dbm, qos_db).map_err(|e| JsError::new(&e))?;
    to_json(&view)
}

/// Every scheme on the same seed; an array of [`TrialView`].
#[wasm_bindgen]
pub fn compare_schemes(seed: u32, power_dbm: f64, qos_db: f64) -> Result<String, JsError> {
    let views = SchemeTag::ALL
        .iter()
        .map(|&s| trial(s, seed.into(), power_dbm, qos_db))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| JsError::new(&e))?;
    to_json(&views)
}
