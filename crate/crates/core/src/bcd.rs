//! Block-coordinate descent over (Λ, W, v, t̃, r̃).
//!
//! Each pass refreshes Λ in closed form (which makes the surrogate equal to the radar SINR),
//! then runs the beamforming SCA, the RIS penalty loop and the two position blocks, and
//! refreshes Λ again before the pass is recorded. Every updater returns its input whenever
//! its candidate would lower its objective or break a constraint, so the recorded surrogate
//! is non-decreasing.

use web_time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::antenna::{update_rx_positions, update_tx_positions, PositionConfig};
use crate::baselines::{fpa_layout, gas_rx_positions, gas_start, gas_tx_positions, random_ris, rpa_layout, SchemeTag};
use crate::beamforming::{effective_channels, max_min_sinr_beamformers, min_power_beamformers, repair_qos, update_beamforming, BeamformingConfig};
use crate::block::BlockStatus;
use crate::config::ScenarioConfig;
use crate::error::{DfrcError, Result};
use crate::geometry::ChannelState;
use crate::linalg::{fro2, linear_to_db, CMatrix, C64};
use crate::metrics::{comm_sinrs, fp_objective, optimal_lambda, radar_sinr, DesignVariables, RadarArrays};
use crate::ris::{update_ris, PenaltyConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BcdConfig {
    /// Relative change of the surrogate between passes that counts as converged.
    pub outer_tol: f64,
    pub max_outer: usize,
    pub beamforming: BeamformingConfig,
    pub penalty: PenaltyConfig,
    pub positions: PositionConfig,
    /// RIS/repair rounds tried during initialization before a trial is declared infeasible.
    pub init_ris_rounds: usize,
}

impl Default for BcdConfig {
    fn default() -> Self {
        Self {
            outer_tol: 1e-3,
            max_outer: 30,
            beamforming: BeamformingConfig::default(),
            penalty: PenaltyConfig::default(),
            positions: PositionConfig::default(),
            init_ris_rounds: 5,
        }
    }
}

impl BcdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.outer_tol > 0.0) || self.max_outer == 0 {
            return Err(DfrcError::InvalidConfig("outer_tol must be positive and max_outer ≥ 1".into()));
        }
        if !(self.positions.tol > 0.0 && self.beamforming.inner_tol > 0.0) {
            return Err(DfrcError::InvalidConfig("inner tolerances must be positive".into()));
        }
        self.penalty.validate()
    }
}

/// Independent random streams of one trial. Channels and the initial RIS come from the
/// seed alone, so every scheme sees the same realization for a given seed.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub const CHANNEL_STREAM: u64 = 0;
pub const INIT_STREAM: u64 = 1;
pub const LAYOUT_STREAM: u64 = 2;

/// State of one pass (pass 0 is the initial point).
#[derive(Debug, Clone, PartialEq)]
pub struct PassRecord {
    pub pass: usize,
    /// Γ̂_r at the end of the pass.
    pub surrogate: f64,
    /// Γ_r of the current (W, t̃, r̃).
    pub radar_sinr: f64,
    /// `min_k Γ_k / γ` in dB.
    pub min_qos_margin_db: f64,
    pub modulus_violation: f64,
    /// [W, v, t̃, r̃]
    pub blocks: [BlockStatus; 4],
    pub wall_time: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub passes: Vec<PassRecord>,
}

impl IterationTrace {
    pub fn surrogates(&self) -> Vec<f64> {
        self.passes.iter().map(|p| p.surrogate).collect()
    }

    /// Largest relative drop of the surrogate between consecutive passes (0 if monotone).
    pub fn worst_decrease(&self) -> f64 {
        self.passes
            .windows(2)
            .map(|w| ((w[0].surrogate - w[1].surrogate) / w[0].surrogate.abs()).max(0.0))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxOuter,
    /// Two consecutive passes in which no block could run.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct BcdResult {
    pub vars: DesignVariables,
    pub trace: IterationTrace,
    pub status: RunStatus,
    /// Full passes executed.
    pub passes: usize,
}

impl BcdResult {
    pub fn final_radar_sinr(&self) -> f64 {
        self.trace.passes.last().map_or(f64::NAN, |p| p.radar_sinr)
    }
}

fn min_sinr(ch: &ChannelState, vars: &DesignVariables, cfg: &ScenarioConfig) -> f64 {
    comm_sinrs(ch, &vars.beamformers, &vars.ris, &vars.tx, cfg.user_noise)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// Matched beamformers through the cascaded channel at full power.
pub fn matched_beamformers(ch: &ChannelState, vars: &DesignVariables, cfg: &ScenarioConfig) -> CMatrix {
    let g = effective_channels(ch, &vars.ris, &vars.tx);
    let mut w = CMatrix::zeros(vars.tx.len(), g.len());
    for (k, gk) in g.iter().enumerate() {
        w.set_column(k, gk);
    }
    let p = fro2(&w);
    if p > 0.0 {
        w *= C64::new((cfg.power_budget / p).sqrt(), 0.0);
    }
    w
}

fn refresh_lambda(ch: &ChannelState, vars: &mut DesignVariables) -> Result<()> {
    let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
    vars.aux = optimal_lambda(&arrays, &vars.beamformers)?;
    Ok(())
}

/// Initial point: scheme-specific layouts, random RIS phases, matched beamformers and, if
/// any SINR target is missed, power-minimizing repair. When repair fails and the scheme
/// optimizes the RIS, the RIS block is run to raise the smallest SINR before retrying.
/// Fails with [`DfrcError::Infeasible`] if the targets stay out of reach.
pub fn initialize<R: Rng + ?Sized>(
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &BcdConfig,
    scheme: SchemeTag,
    rng: &mut R,
    layout_rng: &mut R,
) -> Result<DesignVariables> {
    let (tx, rx) = match scheme {
        SchemeTag::Rpa => (
            rpa_layout(cfg.antennas, cfg.half_region(), cfg.min_distance, layout_rng)?,
            rpa_layout(cfg.antennas, cfg.half_region(), cfg.min_distance, layout_rng)?,
        ),
        SchemeTag::Gas => (gas_start(cfg)?, gas_start(cfg)?),
        _ => {
            let l = fpa_layout(cfg.antennas, cfg.wavelength, cfg.region_size)?;
            (l.clone(), l)
        }
    };
    let mut vars = DesignVariables {
        beamformers: CMatrix::zeros(cfg.antennas, cfg.users),
        ris: random_ris(cfg.ris_elements, rng),
        tx,
        rx,
        aux: CMatrix::zeros(cfg.antennas, cfg.users),
    };
    vars.beamformers = matched_beamformers(ch, &vars, cfg);

    if min_sinr(ch, &vars, cfg) < cfg.qos {
        vars.beamformers = repair(ch, cfg, opts, scheme, &mut vars)?;
    }
    refresh_lambda(ch, &mut vars)?;
    Ok(vars)
}

/// Power-minimizing repair: SCA from the matched point, then the exact duality solution,
/// then alternating max-min-SINR beamforming and RIS steps.
fn repair(
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &BcdConfig,
    scheme: SchemeTag,
    vars: &mut DesignVariables,
) -> Result<CMatrix> {
    match repair_qos(vars, ch, cfg) {
        Ok(w) => return Ok(w),
        Err(DfrcError::Infeasible(_)) => {}
        Err(e) => return Err(e),
    }
    for round in 0..=opts.init_ris_rounds {
        let g = effective_channels(ch, &vars.ris, &vars.tx);
        if let Some(w) = min_power_beamformers(&g, cfg.user_noise, cfg.qos, cfg.power_budget) {
            return Ok(w);
        }
        if !scheme.optimizes_ris() || round == opts.init_ris_rounds {
            break;
        }
        let Some((w, _)) = max_min_sinr_beamformers(&g, cfg.user_noise, cfg.power_budget) else { break };
        vars.beamformers = w;
        let report = update_ris(vars, ch, cfg, &opts.penalty)?;
        if !report.outcome.changed() {
            break;
        }
        vars.ris = report.outcome.value;
    }
    Err(DfrcError::Infeasible(format!(
        "SINR target {:.2} dB not reachable within {:.3e} W",
        linear_to_db(cfg.qos),
        cfg.power_budget
    )))
}

fn record(
    pass: usize,
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    vars: &DesignVariables,
    blocks: [BlockStatus; 4],
    start: Instant,
) -> Result<PassRecord> {
    let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
    Ok(PassRecord {
        pass,
        surrogate: fp_objective(&arrays, &vars.beamformers, &vars.aux)?,
        radar_sinr: radar_sinr(&arrays, &vars.beamformers)?,
        min_qos_margin_db: linear_to_db(min_sinr(ch, vars, cfg) / cfg.qos),
        modulus_violation: vars.max_modulus_violation(),
        blocks,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

fn ran(status: BlockStatus) -> bool {
    matches!(status, BlockStatus::Updated | BlockStatus::Kept)
}

/// Cyclic updates Λ → W → v → t̃ → r̃ from a feasible initial point.
pub fn run(
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &BcdConfig,
    scheme: SchemeTag,
    init: DesignVariables,
) -> Result<BcdResult> {
    opts.validate()?;
    let start = Instant::now();
    let mut vars = init;
    refresh_lambda(ch, &mut vars)?;
    let mut trace = IterationTrace::default();
    trace.passes.push(record(0, ch, cfg, &vars, [BlockStatus::Skipped; 4], start)?);

    let mut status = RunStatus::MaxOuter;
    let mut idle_passes = 0;
    for pass in 1..=opts.max_outer {
        refresh_lambda(ch, &mut vars)?;

        let w = update_beamforming(&vars, ch, cfg, &opts.beamforming)?;
        vars.beamformers = w.value;

        let v_status = if scheme.optimizes_ris() {
            let r = update_ris(&vars, ch, cfg, &opts.penalty)?;
            vars.ris = r.outcome.value;
            r.outcome.status
        } else {
            BlockStatus::Skipped
        };

        let (t_status, r_status) = if scheme.continuous_positions() {
            let t = update_tx_positions(&vars, ch, cfg, &opts.positions)?;
            vars.tx = t.value;
            let r = update_rx_positions(&vars, ch, cfg, &opts.positions)?;
            vars.rx = r.value;
            (t.status, r.status)
        } else if scheme == SchemeTag::Gas {
            let t = gas_tx_positions(&vars, ch, cfg)?;
            vars.tx = t.value;
            let r = gas_rx_positions(&vars, ch, cfg)?;
            vars.rx = r.value;
            (t.status, r.status)
        } else {
            (BlockStatus::Skipped, BlockStatus::Skipped)
        };

        let blocks = [w.status, v_status, t_status, r_status];
        refresh_lambda(ch, &mut vars)?;
        let rec = record(pass, ch, cfg, &vars, blocks, start)?;
        let prev = trace.passes.last().map(|p| p.surrogate).unwrap_or(rec.surrogate);
        let change = (rec.surrogate - prev).abs() / prev.abs().max(f64::MIN_POSITIVE);
        trace.passes.push(rec);

        idle_passes = if blocks.iter().any(|&s| ran(s)) { 0 } else { idle_passes + 1 };
        if idle_passes >= 2 {
            status = RunStatus::Stalled;
            break;
        }
        if change < opts.outer_tol {
            status = RunStatus::Converged;
            break;
        }
    }
    let passes = trace.passes.len() - 1;
    Ok(BcdResult { vars, trace, status, passes })
}
