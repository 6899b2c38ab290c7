//! Movable-antenna position blocks.
//!
//! With W, Λ and the RIS fixed, the radar surrogate depends on the transmit positions only
//! through the steering vectors `a_qᵗ(t̃)`:
//!
//! ```text
//! Γ̂_r(t̃) = 2Re{bᴴ a₀ᵗ} − Σ_q c_q a_qᵗᴴ P a_qᵗ + const,
//! b = ζ₀² W Λᴴ a₀ʳ,   c_q = ζ₀² ζ_q² ‖Λᴴ a_qʳ‖²,   P = W Wᴴ,
//! ```
//!
//! and symmetrically on the receive positions (`b = ζ₀² Λ Wᴴ a₀ᵗ`, `c_q = ζ₀² ζ_q² ‖Wᴴ a_qᵗ‖²`,
//! `P = Λ Λᴴ`). Each SINR constraint becomes `f_k(t̃) + γσ² ≤ 0` with `f_k = yᴴ R_k y`,
//! `y = G(t̃)ᴴ a_k`. Both are replaced by quadratic bounds with a position-independent
//! curvature, the distance constraints are linearized, and the resulting QCQP is solved in
//! coordinates scaled by 1/λ. The curvature is backtracked from a local estimate up to the
//! global bound, so steps are long where the bound is loose.

use crate::block::{BlockOutcome, BlockStatus};
use crate::config::ScenarioConfig;
use crate::convex::{solve, ConvexQCQP, QuadForm, Quadratic, SolveStatus, FEAS_TOL};
use crate::error::Result;
use crate::geometry::{flatten, min_pairwise_distance, steering_vector, unflatten, wavenumber, ChannelState, Direction, Position2D};
use crate::linalg::{max_abs_row_sum, CMatrix, CVector, RVector, C64};
use crate::metrics::{DesignVariables, RadarArrays};

/// Floor applied to every curvature bound.
const MIN_CURVATURE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PositionConfig {
    pub max_inner: usize,
    /// Largest single-antenna move, in wavelengths, that ends the SCA loop.
    pub tol: f64,
    /// Curvature doublings allowed past the global bound when it fails numerically.
    pub max_doublings: usize,
    pub solver_tol: f64,
}

impl Default for PositionConfig {
    fn default() -> Self {
        Self {
            max_inner: 15,
            tol: 1e-4,
            max_doublings: 5,
            solver_tol: 1e-10,
        }
    }
}

/// A smooth function of the stacked position vector `[x₁, y₁, …]`.
pub trait PositionFunction {
    fn value(&self, pos: &[Position2D]) -> f64;
    fn gradient(&self, pos: &[Position2D]) -> Vec<f64>;
}

/// A position function with a global bound on its Hessian spectral norm.
pub trait CurvatureBound: PositionFunction {
    fn curvature_bound(&self) -> f64;
}

/// Radar surrogate as a function of one array's positions.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFactors {
    pub b: CVector,
    /// c_q ≥ 0
    pub clutter_weights: Vec<f64>,
    /// P, Hermitian PSD.
    pub gram: CMatrix,
    pub target: Direction,
    pub clutter: Vec<Direction>,
    pub wavelength: f64,
}

impl ObjectiveFactors {
    /// Factors for moving the transmit array (receive positions fixed).
    pub fn transmit(ch: &ChannelState, vars: &DesignVariables) -> Self {
        let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
        let z0 = ch.radar.target_power;
        let w = &vars.beamformers;
        let lam = &vars.aux;
        Self {
            b: w * (lam.adjoint() * &arrays.target_rx) * C64::new(z0, 0.0),
            clutter_weights: (0..arrays.clutter_rx.len())
                .map(|q| z0 * ch.radar.clutter_power[q] * (lam.adjoint() * &arrays.clutter_rx[q]).norm_squared())
                .collect(),
            gram: w * w.adjoint(),
            target: ch.radar.target,
            clutter: ch.radar.clutter.clone(),
            wavelength: ch.wavelength,
        }
    }

    /// Factors for moving the receive array (transmit positions fixed).
    pub fn receive(ch: &ChannelState, vars: &DesignVariables) -> Self {
        let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
        let z0 = ch.radar.target_power;
        let w = &vars.beamformers;
        let lam = &vars.aux;
        Self {
            b: lam * (w.adjoint() * &arrays.target_tx) * C64::new(z0, 0.0),
            clutter_weights: (0..arrays.clutter_tx.len())
                .map(|q| z0 * ch.radar.clutter_power[q] * (w.adjoint() * &arrays.clutter_tx[q]).norm_squared())
                .collect(),
            gram: lam * lam.adjoint(),
            target: ch.radar.target,
            clutter: ch.radar.clutter.clone(),
            wavelength: ch.wavelength,
        }
    }
}

fn norm2(u: [f64; 2]) -> f64 {
    u[0] * u[0] + u[1] * u[1]
}

/// `2Re{bᴴ a₀} − Σ_q c_q a_qᴴ P a_q`
pub fn position_objective(pos: &[Position2D], f: &ObjectiveFactors) -> f64 {
    f.value(pos)
}

pub fn objective_gradient(pos: &[Position2D], f: &ObjectiveFactors) -> Vec<f64> {
    f.gradient(pos)
}

impl PositionFunction for ObjectiveFactors {
    fn value(&self, pos: &[Position2D]) -> f64 {
        let a0 = steering_vector(self.target, pos, self.wavelength);
        let mut v = 2.0 * self.b.dotc(&a0).re;
        for (q, dir) in self.clutter.iter().enumerate() {
            let a = steering_vector(*dir, pos, self.wavelength);
            v -= self.clutter_weights[q] * a.dotc(&(&self.gram * &a)).re;
        }
        v
    }

    fn gradient(&self, pos: &[Position2D]) -> Vec<f64> {
        let kappa = wavenumber(self.wavelength);
        let mut g = vec![0.0; 2 * pos.len()];
        let a0 = steering_vector(self.target, pos, self.wavelength);
        let u0 = self.target.wavevector();
        for n in 0..pos.len() {
            let s = -2.0 * kappa * (self.b[n].conj() * a0[n]).im;
            g[2 * n] += s * u0[0];
            g[2 * n + 1] += s * u0[1];
        }
        for (q, dir) in self.clutter.iter().enumerate() {
            let a = steering_vector(*dir, pos, self.wavelength);
            let pa = &self.gram * &a;
            let u = dir.wavevector();
            for n in 0..pos.len() {
                let s = 2.0 * kappa * self.clutter_weights[q] * (a[n] * pa[n].conj()).im;
                g[2 * n] += s * u[0];
                g[2 * n + 1] += s * u[1];
            }
        }
        g
    }
}

impl CurvatureBound for ObjectiveFactors {
    /// Linear part: block-diagonal Hessian, `2κ²‖u₀‖² max_n |b_n|`. Clutter part: a signed
    /// Laplacian weighted by `2|P_nm|`, bounded by Gershgorin as `4κ² c_q ‖u_q‖² max row sum`.
    fn curvature_bound(&self) -> f64 {
        let k2 = wavenumber(self.wavelength).powi(2);
        let bmax = self.b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut delta = 2.0 * k2 * norm2(self.target.wavevector()) * bmax;
        let rows = max_abs_row_sum(&self.gram);
        for (q, dir) in self.clutter.iter().enumerate() {
            delta += 4.0 * k2 * self.clutter_weights[q] * norm2(dir.wavevector()) * rows;
        }
        delta.max(MIN_CURVATURE)
    }
}

/// `f_k(t̃) = a_kᴴ G(t̃) R_k G(t̃)ᴴ a_k` for one user.
#[derive(Debug, Clone, PartialEq)]
pub struct QosFactors {
    /// `a_k = Σᴴ F Vᴴ h_k`, one entry per BS-side path.
    pub a: CVector,
    pub paths: Vec<Direction>,
    /// `R_k = γ Σ_{j≠k} w_j w_jᴴ − w_k w_kᴴ`
    pub r: CMatrix,
    pub wavelength: f64,
    /// `γ σ²`
    pub offset: f64,
}

impl QosFactors {
    pub fn new(k: usize, ch: &ChannelState, vars: &DesignVariables, qos: f64, noise: f64) -> Self {
        let vh = CVector::from_fn(vars.ris.len(), |m, _| vars.ris[m].conj() * ch.users[k].channel[m]);
        let w = &vars.beamformers;
        let n = w.nrows();
        let mut r = CMatrix::zeros(n, n);
        for j in 0..w.ncols() {
            let wj = w.column(j);
            let scale = if j == k { -1.0 } else { qos };
            r += (wj * wj.adjoint()) * C64::new(scale, 0.0);
        }
        Self {
            a: ch.bs_ris.cascade.adjoint() * vh,
            paths: ch.bs_ris.bs_paths.clone(),
            r,
            wavelength: ch.wavelength,
            offset: qos * noise,
        }
    }

    /// `y_n = Σ_l a_l e^{−iκρ_l(t_n)}`
    fn y(&self, pos: &[Position2D]) -> CVector {
        let kappa = wavenumber(self.wavelength);
        CVector::from_fn(pos.len(), |n, _| {
            self.paths
                .iter()
                .zip(self.a.iter())
                .map(|(d, a)| a * C64::from_polar(1.0, -kappa * crate::geometry::propagation_diff(pos[n], *d)))
                .sum()
        })
    }

    /// `f_k + γσ²`; non-positive exactly when the SINR target is met.
    pub fn constraint_value(&self, pos: &[Position2D]) -> f64 {
        self.value(pos) + self.offset
    }
}

impl PositionFunction for QosFactors {
    fn value(&self, pos: &[Position2D]) -> f64 {
        let y = self.y(pos);
        y.dotc(&(&self.r * &y)).re
    }

    fn gradient(&self, pos: &[Position2D]) -> Vec<f64> {
        let kappa = wavenumber(self.wavelength);
        let y = self.y(pos);
        let ry = &self.r * &y;
        let mut g = vec![0.0; 2 * pos.len()];
        for n in 0..pos.len() {
            for (d, a) in self.paths.iter().zip(self.a.iter()) {
                // ∂y_n = −iκ u_l a_l e^{−iκρ_l}
                let e = a * C64::from_polar(1.0, -kappa * crate::geometry::propagation_diff(pos[n], *d));
                let s = 2.0 * (ry[n].conj() * C64::new(0.0, -kappa) * e).re;
                let u = d.wavevector();
                g[2 * n] += s * u[0];
                g[2 * n + 1] += s * u[1];
            }
        }
        g
    }
}

impl CurvatureBound for QosFactors {
    /// `2κ² ‖R‖_∞ (S₀S₂ + S₁²)` with `S_p = Σ_l |a_l| ‖u_l‖^p`.
    fn curvature_bound(&self) -> f64 {
        let k2 = wavenumber(self.wavelength).powi(2);
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for (d, a) in self.paths.iter().zip(self.a.iter()) {
            let u2 = norm2(d.wavevector());
            s0 += a.norm();
            s1 += a.norm() * u2.sqrt();
            s2 += a.norm() * u2;
        }
        (2.0 * k2 * max_abs_row_sum(&self.r) * (s0 * s2 + s1 * s1)).max(MIN_CURVATURE)
    }
}

/// First-order expansion plus a curvature term around `expansion`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionSurrogate {
    pub expansion: Vec<f64>,
    pub value: f64,
    pub gradient: Vec<f64>,
    pub curvature: f64,
}

impl PositionSurrogate {
    pub fn new<F: CurvatureBound>(f: &F, expansion: &[Position2D]) -> Self {
        Self::with_curvature(f, expansion, f.curvature_bound())
    }

    pub fn with_curvature<F: PositionFunction>(f: &F, expansion: &[Position2D], curvature: f64) -> Self {
        Self {
            expansion: flatten(expansion),
            value: f.value(expansion),
            gradient: f.gradient(expansion),
            curvature,
        }
    }

    fn linear_at(&self, pos: &[Position2D]) -> (f64, f64) {
        let x = flatten(pos);
        let mut lin = self.value;
        let mut sq = 0.0;
        for i in 0..x.len() {
            let d = x[i] - self.expansion[i];
            lin += self.gradient[i] * d;
            sq += d * d;
        }
        (lin, sq)
    }

    /// Concave minorant (objective surrogate).
    pub fn lower(&self, pos: &[Position2D]) -> f64 {
        let (lin, sq) = self.linear_at(pos);
        lin - 0.5 * self.curvature * sq
    }

    /// Convex majorant (constraint surrogate).
    pub fn upper(&self, pos: &[Position2D]) -> f64 {
        let (lin, sq) = self.linear_at(pos);
        lin + 0.5 * self.curvature * sq
    }

    /// The surrogate over `s = t̃/λ`, times `scale`: `value + gᵀλ(s − s⁰) + sign·δλ²/2 ‖s − s⁰‖²`.
    fn quadratic(&self, wavelength: f64, sign: f64, scale: f64) -> Quadratic {
        let dim = self.expansion.len();
        let c = sign * 0.5 * self.curvature * wavelength * wavelength;
        let s0: Vec<f64> = self.expansion.iter().map(|t| t / wavelength).collect();
        let mut linear = RVector::zeros(dim);
        let mut constant = self.value;
        for i in 0..dim {
            let g = self.gradient[i] * wavelength;
            linear[i] = g - 2.0 * c * s0[i];
            constant += -g * s0[i] + c * s0[i] * s0[i];
        }
        Quadratic::linear(linear * scale, constant * scale)
            .with_quad(QuadForm::scaled_identity((0..dim).collect(), c * scale))
    }
}

/// SINR constraint surrogate of user k around `expansion`.
pub fn qos_position_constraint(
    k: usize,
    expansion: &[Position2D],
    ch: &ChannelState,
    vars: &DesignVariables,
    cfg: &ScenarioConfig,
) -> (QosFactors, PositionSurrogate) {
    let f = QosFactors::new(k, ch, vars, cfg.qos, cfg.user_noise);
    let s = PositionSurrogate::new(&f, expansion);
    (f, s)
}

/// `2 dᵀ(t_n − t_m) − ‖d‖² ≥ D²` with `d = t_n^(l) − t_m^(l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedDistance {
    pub n: usize,
    pub m: usize,
    pub direction: [f64; 2],
}

impl LinearizedDistance {
    /// Left-hand side; a lower bound of `‖t_n − t_m‖²`.
    pub fn value(&self, pos: &[Position2D]) -> f64 {
        let d = self.direction;
        let dx = pos[self.n].x - pos[self.m].x;
        let dy = pos[self.n].y - pos[self.m].y;
        2.0 * (d[0] * dx + d[1] * dy) - norm2(d)
    }

    /// `(D² − lhs) / λ² ≤ 0` over `s = t̃/λ`.
    fn quadratic(&self, dim: usize, min_distance: f64, wavelength: f64) -> Quadratic {
        let d = [self.direction[0] / wavelength, self.direction[1] / wavelength];
        let mut lin = RVector::zeros(dim);
        lin[2 * self.n] = -2.0 * d[0];
        lin[2 * self.n + 1] = -2.0 * d[1];
        lin[2 * self.m] = 2.0 * d[0];
        lin[2 * self.m + 1] = 2.0 * d[1];
        Quadratic::linear(lin, (min_distance / wavelength).powi(2) + norm2(d))
    }
}

/// Linearized pairwise distance constraints. Coincident expansion points are separated by a
/// deterministic offset of 1e−6·λ first.
pub fn min_distance_constraints(expansion: &[Position2D], wavelength: f64) -> Vec<LinearizedDistance> {
    let mut pts = expansion.to_vec();
    let nudge = 1e-6 * wavelength;
    for n in 1..pts.len() {
        if (0..n).any(|m| pts[m].distance(&pts[n]) == 0.0) {
            let angle = n as f64 * 2.399_963_229_728_653; // golden angle
            pts[n] = Position2D::new(pts[n].x + nudge * angle.cos(), pts[n].y + nudge * angle.sin());
        }
    }
    let mut out = Vec::new();
    for n in 0..pts.len() {
        for m in n + 1..pts.len() {
            out.push(LinearizedDistance {
                n,
                m,
                direction: [pts[n].x - pts[m].x, pts[n].y - pts[m].y],
            });
        }
    }
    out
}

fn in_region(pos: &[Position2D], half: f64) -> bool {
    pos.iter().all(|p| p.x.abs() <= half + 1e-12 && p.y.abs() <= half + 1e-12)
}

/// SCA over one array's positions: maximize `objective` subject to the region, the linearized
/// minimum distance and `q.constraint_value ≤ 0` for every entry of `qos`.
///
/// Curvatures are backtracked: every step starts from a local estimate (a trial move of about
/// λ/10) and is multiplied by 4 until the true objective increases sufficiently and every true
/// SINR constraint holds. Once the multiplier reaches the global bounds the surrogates are
/// valid minorants/majorants, so a step is always accepted there unless the subproblem is
/// infeasible; a few further doublings absorb rounding.
fn sca_positions<F: PositionFunction>(
    start: &[Position2D],
    objective: &F,
    global: Option<f64>,
    qos: &[QosFactors],
    cfg: &ScenarioConfig,
    opts: &PositionConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    const ARMIJO: f64 = 1e-4;
    const MAX_BACKTRACK: usize = 40;
    let lambda = cfg.wavelength;
    let half = cfg.half_region();
    let dim = 2 * start.len();
    let qos_ok = |pos: &[Position2D]| qos.iter().all(|q| q.constraint_value(pos) <= 0.0);
    if !qos_ok(start) {
        return Ok(BlockOutcome::kept(start.to_vec(), BlockStatus::Skipped, 0));
    }
    let qos_bounds: Vec<f64> = qos.iter().map(|q| q.curvature_bound()).collect();
    let bounds = vec![(-half / lambda, half / lambda); dim];
    let f_in = objective.value(start);

    let mut pos = start.to_vec();
    let mut f = f_in;
    // curvature multiplier relative to `base`
    let mut theta = f64::NAN;
    let mut base = f64::NAN;
    let mut iterations = 0;
    'sca: for _ in 0..opts.max_inner {
        iterations += 1;
        let grad = objective.gradient(&pos);
        let gmax = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
        if !(gmax > 0.0) {
            break;
        }
        if !theta.is_finite() {
            let local = gmax / (0.1 * lambda);
            base = global.unwrap_or(local);
            theta = (local / base).min(1.0);
        }
        let qos_sur: Vec<PositionSurrogate> = qos
            .iter()
            .zip(&qos_bounds)
            .map(|(q, &b)| PositionSurrogate::with_curvature(q, &pos, b))
            .collect();
        let dist = min_distance_constraints(&pos, lambda);
        let x0: Vec<f64> = flatten(&pos).iter().map(|t| t / lambda).collect();
        let mut accepted = None;
        let mut beyond = 0;
        for _ in 0..MAX_BACKTRACK {
            let valid_bounds = global.is_some() && theta >= 1.0;
            if valid_bounds {
                beyond += 1;
                if beyond > opts.max_doublings + 1 {
                    break;
                }
            }
            let sur = PositionSurrogate {
                expansion: flatten(&pos),
                value: f,
                gradient: grad.clone(),
                curvature: base * theta,
            };
            let scale = 1.0 / f.abs().max(gmax * lambda).max(sur.curvature * lambda * lambda).max(f64::MIN_POSITIVE);
            let mut cons: Vec<Quadratic> = qos_sur
                .iter()
                .zip(qos)
                .map(|(s, q)| {
                    let mut s = s.clone();
                    s.curvature *= theta;
                    let mut c = s.quadratic(lambda, 1.0, 1.0 / q.offset);
                    c.constant += 1.0;
                    c
                })
                .collect();
            cons.extend(dist.iter().map(|d| d.quadratic(dim, cfg.min_distance, lambda)));
            let p = ConvexQCQP::new(sur.quadratic(lambda, -1.0, scale), cons, Some(bounds.clone()))?;
            let report = solve(&p, opts.solver_tol, Some(&x0));
            let usable = report.status == SolveStatus::Optimal
                || (report.status == SolveStatus::MaxIter && report.max_violation <= FEAS_TOL);
            if !usable {
                if valid_bounds {
                    if iterations == 1 {
                        return Ok(BlockOutcome::kept(start.to_vec(), BlockStatus::Infeasible, iterations));
                    }
                    break 'sca;
                }
                theta *= 4.0;
                continue;
            }
            let cand = unflatten(&report.x.iter().map(|s| s * lambda).collect::<Vec<_>>());
            let predicted = sur.lower(&cand) - f;
            if predicted <= 1e-14 * f.abs() {
                break 'sca;
            }
            let f_c = objective.value(&cand);
            let required = if valid_bounds { f } else { f + ARMIJO * predicted };
            if f_c >= required && qos_ok(&cand) {
                accepted = Some((cand, f_c));
                break;
            }
            theta *= if valid_bounds { 2.0 } else { 4.0 };
        }
        let Some((cand, f_c)) = accepted else { break };
        let moved = cand.iter().zip(&pos).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
        pos = cand;
        f = f_c;
        theta /= 2.0;
        if moved < opts.tol * lambda {
            break;
        }
    }

    let valid = in_region(&pos, half)
        && (pos.len() < 2 || min_pairwise_distance(&pos) >= cfg.min_distance - 1e-9)
        && qos_ok(&pos);
    if !valid || f < f_in {
        return Ok(BlockOutcome::kept(start.to_vec(), BlockStatus::Kept, iterations));
    }
    let status = if pos == start { BlockStatus::Kept } else { BlockStatus::Updated };
    Ok(BlockOutcome::kept(pos, status, iterations))
}

/// Position SCA for the radar surrogate with fixed Λ, under the SINR constraints in `qos`.
pub fn optimize_positions(
    start: &[Position2D],
    objective: &ObjectiveFactors,
    qos: &[QosFactors],
    cfg: &ScenarioConfig,
    opts: &PositionConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    sca_positions(start, objective, Some(objective.curvature_bound()), qos, cfg, opts)
}

pub fn update_tx_positions(
    vars: &DesignVariables,
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &PositionConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    let objective = ObjectiveFactors::transmit(ch, vars);
    let qos: Vec<QosFactors> = (0..ch.user_count())
        .map(|k| QosFactors::new(k, ch, vars, cfg.qos, cfg.user_noise))
        .collect();
    optimize_positions(&vars.tx, &objective, &qos, cfg, opts)
}

/// Radar SINR as a function of the receive positions, with the receive filter re-optimized
/// for every layout: `ζ₀² ‖Wᴴ a₀ᵗ‖² · a₀ʳᴴ (Ξ + σ_r² I)⁻¹ a₀ʳ`.
///
/// For a fixed Λ the receive surrogate is pinned by the clutter null the filter places: any
/// move breaks the null at a cost proportional to the clutter-to-noise ratio. Eliminating
/// the filter removes that barrier.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceiveSinr {
    /// `ζ₀² ‖Wᴴ a₀ᵗ‖²`
    pub transmit_gain: f64,
    /// `ω_q = ζ_q² ‖Wᴴ a_qᵗ‖²`
    pub clutter_load: Vec<f64>,
    pub target: Direction,
    pub clutter: Vec<Direction>,
    pub wavelength: f64,
    pub noise: f64,
}

impl ReceiveSinr {
    pub fn new(ch: &ChannelState, vars: &DesignVariables) -> Self {
        let w = &vars.beamformers;
        let at = steering_vector(ch.radar.target, &vars.tx, ch.wavelength);
        Self {
            transmit_gain: ch.radar.target_power * (w.adjoint() * at).norm_squared(),
            clutter_load: ch
                .radar
                .clutter
                .iter()
                .zip(&ch.radar.clutter_power)
                .map(|(d, p)| p * (w.adjoint() * steering_vector(*d, &vars.tx, ch.wavelength)).norm_squared())
                .collect(),
            target: ch.radar.target,
            clutter: ch.radar.clutter.clone(),
            wavelength: ch.wavelength,
            noise: ch.radar.noise,
        }
    }

    /// Target steering vector, scaled clutter factors `F = [√ω_q a_q]`, `z = Fᴴa`, `M⁻¹z`
    /// with `M = σ²I + FᴴF`.
    fn parts(&self, pos: &[Position2D]) -> (CVector, CMatrix, CVector, CVector) {
        let a = steering_vector(self.target, pos, self.wavelength);
        let q = self.clutter.len();
        let mut f = CMatrix::zeros(pos.len(), q);
        for (i, d) in self.clutter.iter().enumerate() {
            f.set_column(i, &(steering_vector(*d, pos, self.wavelength) * C64::new(self.clutter_load[i].sqrt(), 0.0)));
        }
        let z = f.adjoint() * &a;
        let mut m = f.adjoint() * &f;
        for i in 0..q {
            m[(i, i)] += self.noise;
        }
        let y = match m.cholesky() {
            Some(c) => c.solve(&z),
            None => CVector::zeros(q),
        };
        (a, f, z, y)
    }
}

impl PositionFunction for ReceiveSinr {
    fn value(&self, pos: &[Position2D]) -> f64 {
        let (a, _, z, y) = self.parts(pos);
        self.transmit_gain * (a.norm_squared() - z.dotc(&y).re) / self.noise
    }

    fn gradient(&self, pos: &[Position2D]) -> Vec<f64> {
        // ψ = zᴴM⁻¹z:  dψ = 2Re{dzᴴ y} − yᴴ dM y
        let (a, f, _, y) = self.parts(pos);
        let ik = C64::new(0.0, wavenumber(self.wavelength));
        let u0 = self.target.wavevector();
        let u: Vec<[f64; 2]> = self.clutter.iter().map(|d| d.wavevector()).collect();
        let q = u.len();
        let scale = -self.transmit_gain / self.noise;
        let mut g = vec![0.0; 2 * pos.len()];
        for n in 0..pos.len() {
            for c in 0..2 {
                let mut d = 0.0;
                for i in 0..q {
                    let dz = f[(n, i)].conj() * a[n] * ik * (u0[c] - u[i][c]);
                    d += 2.0 * (dz.conj() * y[i]).re;
                    for j in 0..q {
                        let dm = f[(n, i)].conj() * f[(n, j)] * ik * (u[j][c] - u[i][c]);
                        d -= (y[i].conj() * dm * y[j]).re;
                    }
                }
                g[2 * n + c] = scale * d;
            }
        }
        g
    }
}

/// Position SCA for an objective without a usable global curvature bound, region and
/// distance constraints only.
pub fn ascend_positions<F: PositionFunction>(
    start: &[Position2D],
    objective: &F,
    cfg: &ScenarioConfig,
    opts: &PositionConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    sca_positions(start, objective, None, &[], cfg, opts)
}

/// Receive positions do not enter the communication SINRs, so only geometry constrains them.
/// The radar SINR with the filter eliminated is maximized; it never decreases.
pub fn update_rx_positions(
    vars: &DesignVariables,
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &PositionConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    ascend_positions(&vars.rx, &ReceiveSinr::new(ch, vars), cfg, opts)
}
