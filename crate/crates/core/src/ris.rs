//! RIS phase block.
//!
//! The radar SINR does not depend on the reflection coefficients, so this block uses them to
//! enlarge the feasible set of the other blocks: it maximizes the smallest communication
//! SINR. The min-SINR problem is rewritten with a common lower bound η and per-user
//! interference bounds z_k; the signal term is linearized from below, the product ηz_k is
//! bounded from above, and the unit-modulus constraint is relaxed to `|v_m| ≤ 1` with a
//! linearized penalty `ρ(‖v‖² − M)` whose weight grows geometrically.
//!
//! Throughout, `v` is the conjugate of the reflection coefficients, so that
//! `h_kᴴ V H w_j = vᴴ h̃_{k,j}` with `h̃_{k,j} = diag(h_kᴴ) H w_j`. Interference bounds are
//! stored divided by σ_k².

use crate::block::{BlockOutcome, BlockStatus};
use crate::config::ScenarioConfig;
use crate::convex::{solve, ComplexLift, ConvexQCQP, QuadForm, Quadratic, SolveStatus, FEAS_TOL};
use crate::error::{DfrcError, Result};
use crate::geometry::{ChannelState, Position2D};
use crate::linalg::{inner, CMatrix, CVector, RMatrix, RVector, C64};
use crate::metrics::DesignVariables;

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyConfig {
    /// ρ₁ before the first outer pass, as a fraction of M.
    pub rho_init_fraction: f64,
    pub tau: f64,
    /// Inner stop: `‖v^(l) − v^(l−1)‖² ≤ ξ₁`.
    pub xi1: f64,
    /// Outer stop: `‖v‖² ≥ M − ξ₂`.
    pub xi2: f64,
    pub max_outer: usize,
    pub max_inner: usize,
    pub solver_tol: f64,
}

impl Default for PenaltyConfig {
    fn default() -> Self {
        Self {
            rho_init_fraction: 0.05,
            tau: 5.0,
            xi1: 1e-4,
            xi2: 1e-3,
            max_outer: 10,
            max_inner: 20,
            solver_tol: 1e-9,
        }
    }
}

impl PenaltyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 1.0) || !(self.xi1 > 0.0) || !(self.xi2 > 0.0) || !(self.rho_init_fraction > 0.0) {
            return Err(DfrcError::InvalidConfig(format!("penalty settings out of range: {self:?}")));
        }
        Ok(())
    }
}

/// η and the normalized interference bounds `z̄_k = z_k / σ_k²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlackState {
    pub eta: f64,
    pub z: Vec<f64>,
}

/// `h̃_{k,j}` for every user k and stream j.
#[derive(Debug, Clone, PartialEq)]
pub struct RisQuadratics {
    pub vectors: Vec<Vec<CVector>>,
}

impl RisQuadratics {
    pub fn users(&self) -> usize {
        self.vectors.len()
    }

    pub fn elements(&self) -> usize {
        self.vectors[0][0].len()
    }

    /// `H̃_{k,j} = h̃_{k,j} h̃_{k,j}ᴴ`
    pub fn matrix(&self, k: usize, j: usize) -> CMatrix {
        let h = &self.vectors[k][j];
        h * h.adjoint()
    }

    /// `vᴴ H̃_{k,j} v`
    pub fn gain(&self, k: usize, j: usize, v: &CVector) -> f64 {
        inner(v, &self.vectors[k][j]).norm_sqr()
    }

    /// Interference plus noise of user k, divided by the noise.
    pub fn normalized_interference(&self, k: usize, v: &CVector, noise: f64) -> f64 {
        1.0 + (0..self.users()).filter(|&j| j != k).map(|j| self.gain(k, j, v)).sum::<f64>() / noise
    }

    pub fn sinrs(&self, v: &CVector, noise: f64) -> Vec<f64> {
        (0..self.users())
            .map(|k| self.gain(k, k, v) / noise / self.normalized_interference(k, v, noise))
            .collect()
    }

    /// Expansion slack that makes the surrogate feasible at `v`.
    pub fn slack_at(&self, v: &CVector, noise: f64) -> SlackState {
        SlackState {
            eta: self.sinrs(v, noise).into_iter().fold(f64::INFINITY, f64::min),
            z: (0..self.users()).map(|k| self.normalized_interference(k, v, noise)).collect(),
        }
    }
}

pub fn build_ris_quadratics(ch: &ChannelState, w: &CMatrix, tx: &[Position2D]) -> RisQuadratics {
    let hw = ch.bs_ris_channel(tx) * w;
    let vectors = ch
        .users
        .iter()
        .map(|u| {
            (0..w.ncols())
                .map(|j| CVector::from_fn(u.channel.len(), |m, _| u.channel[m].conj() * hw[(m, j)]))
                .collect()
        })
        .collect();
    RisQuadratics { vectors }
}

/// Convex upper bound of `η z` around a positive expansion point; tight there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearBound {
    /// Coefficient of η².
    pub eta_coeff: f64,
    /// Coefficient of z².
    pub z_coeff: f64,
}

impl BilinearBound {
    pub fn value(&self, eta: f64, z: f64) -> f64 {
        self.eta_coeff * eta * eta + self.z_coeff * z * z
    }
}

pub fn bilinear_upper_bound(eta_l: f64, z_l: f64) -> Result<BilinearBound> {
    if !(eta_l > 0.0 && z_l > 0.0) {
        return Err(DfrcError::Numerical(format!("bilinear expansion point must be positive, got ({eta_l}, {z_l})")));
    }
    Ok(BilinearBound {
        eta_coeff: 0.5 * z_l / eta_l,
        z_coeff: 0.5 * eta_l / z_l,
    })
}

/// Variable layout `[v (2M) | η | z̄_1 … z̄_K]`.
struct Layout {
    m: usize,
    k: usize,
}

impl Layout {
    fn v(&self) -> ComplexLift {
        ComplexLift::new(0, self.m)
    }
    fn eta(&self) -> usize {
        2 * self.m
    }
    fn z(&self, k: usize) -> usize {
        2 * self.m + 1 + k
    }
    fn dim(&self) -> usize {
        2 * self.m + 1 + self.k
    }
    fn pack(&self, v: &CVector, slack: &SlackState) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.v().write(v, &mut x);
        x[self.eta()] = slack.eta;
        for (k, z) in slack.z.iter().enumerate() {
            x[self.z(k)] = *z;
        }
        x
    }
}

/// The convex subproblem solved in one inner step.
pub fn ris_subproblem(
    v_l: &CVector,
    slack_l: &SlackState,
    quad: &RisQuadratics,
    rho: f64,
    noise: f64,
) -> Result<ConvexQCQP> {
    let lay = Layout {
        m: quad.elements(),
        k: quad.users(),
    };
    let dim = lay.dim();
    let vl = lay.v();

    let mut obj = Quadratic::zero(dim);
    obj.linear[lay.eta()] = 1.0;
    vl.add_real_inner(v_l, 2.0 * rho, &mut obj.linear);
    obj.constant = -rho * v_l.norm_squared() - rho * lay.m as f64;

    let mut cons = Vec::with_capacity(2 * lay.k + lay.m);
    for k in 0..lay.k {
        // Σ_{j≠k} vᴴH̃_{k,j}v / σ² + 1 − z̄_k ≤ 0
        let mut interference = CMatrix::zeros(lay.m, lay.m);
        for j in (0..lay.k).filter(|&j| j != k) {
            interference += quad.matrix(k, j);
        }
        let mut c = Quadratic::zero(dim).with_quad(vl.hermitian_form(&(interference / C64::new(noise, 0.0)))?);
        c.linear[lay.z(k)] = -1.0;
        c.constant = 1.0;
        cons.push(c);

        // bound(η, z̄_k) − [2Re{(v^(l))ᴴH̃_{k,k}v} − (v^(l))ᴴH̃_{k,k}v^(l)] / σ² ≤ 0
        let bound = bilinear_upper_bound(slack_l.eta, slack_l.z[k])?;
        let h = &quad.vectors[k][k];
        let a = inner(h, v_l);
        let mut c = Quadratic::zero(dim)
            .with_quad(QuadForm::scaled_identity(vec![lay.eta()], bound.eta_coeff))
            .with_quad(QuadForm::scaled_identity(vec![lay.z(k)], bound.z_coeff));
        vl.add_real_inner(&(h * a), -2.0 / noise, &mut c.linear);
        c.constant = a.norm_sqr() / noise;
        cons.push(c);
    }
    for m in 0..lay.m {
        cons.push(Quadratic::linear(RVector::zeros(dim), -1.0).with_quad(QuadForm::new(
            vec![2 * m, 2 * m + 1],
            RMatrix::identity(2, 2),
        )));
    }
    ConvexQCQP::new(obj, cons, None)
}

/// One SCA step. `None` if the convex subproblem could not be solved.
pub fn ris_inner_step(
    v_l: &CVector,
    slack_l: &SlackState,
    quad: &RisQuadratics,
    rho: f64,
    noise: f64,
    tol: f64,
) -> Result<Option<(CVector, SlackState)>> {
    let p = ris_subproblem(v_l, slack_l, quad, rho, noise)?;
    let lay = Layout {
        m: quad.elements(),
        k: quad.users(),
    };
    let report = solve(&p, tol, Some(&lay.pack(v_l, slack_l)));
    let usable = report.status == SolveStatus::Optimal
        || (report.status == SolveStatus::MaxIter && report.max_violation <= FEAS_TOL);
    if !usable {
        return Ok(None);
    }
    let x = &report.x;
    let slack = SlackState {
        eta: x[lay.eta()],
        z: (0..lay.k).map(|k| x[lay.z(k)]).collect(),
    };
    Ok(Some((lay.v().read(x), slack)))
}

/// Diagnostics of one RIS update.
#[derive(Debug, Clone, PartialEq)]
pub struct RisReport {
    /// Reflection coefficients (not conjugated).
    pub outcome: BlockOutcome<CVector>,
    /// `‖v‖²` right before the unit-modulus projection.
    pub pre_projection_norm2: f64,
    pub outer_iterations: usize,
    pub final_rho: f64,
    pub min_sinr_before: f64,
    pub min_sinr_after: f64,
}

fn min_of(v: Vec<f64>) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

/// Two-layer penalty loop followed by an exact unit-modulus projection. The input is
/// returned unchanged if the projected point lowers the smallest user SINR.
pub fn update_ris(
    vars: &DesignVariables,
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    pen: &PenaltyConfig,
) -> Result<RisReport> {
    pen.validate()?;
    let noise = cfg.user_noise;
    let quad = build_ris_quadratics(ch, &vars.beamformers, &vars.tx);
    let m = quad.elements() as f64;
    let v_in = vars.ris.map(|z| z.conj());
    let before = min_of(quad.sinrs(&v_in, noise));

    let mut v = v_in.clone();
    let mut slack = quad.slack_at(&v, noise);
    slack.eta = slack.eta.max(1e-12);
    let mut rho = pen.rho_init_fraction * m;
    let mut iterations = 0;
    let mut outer = 0;
    let mut failed = false;
    'outer: for _ in 0..pen.max_outer {
        outer += 1;
        rho *= pen.tau;
        for _ in 0..pen.max_inner {
            iterations += 1;
            match ris_inner_step(&v, &slack, &quad, rho, noise, pen.solver_tol)? {
                Some((next, mut s)) => {
                    let step = (&next - &v).norm_squared();
                    s.eta = s.eta.max(1e-12);
                    v = next;
                    slack = s;
                    if step <= pen.xi1 {
                        break;
                    }
                }
                None => {
                    failed = iterations == 1;
                    break 'outer;
                }
            }
        }
        if v.norm_squared() >= m - pen.xi2 {
            break;
        }
    }
    let pre_projection_norm2 = v.norm_squared();

    let projected = CVector::from_fn(v.len(), |i, _| {
        let r = v[i].norm();
        if r > 0.0 {
            v[i] / r
        } else {
            v_in[i]
        }
    });
    let after = min_of(quad.sinrs(&projected, noise));
    let report = |value: CVector, status: BlockStatus, after: f64| RisReport {
        outcome: BlockOutcome::kept(value, status, iterations),
        pre_projection_norm2,
        outer_iterations: outer,
        final_rho: rho,
        min_sinr_before: before,
        min_sinr_after: after,
    };
    if failed {
        return Ok(report(vars.ris.clone(), BlockStatus::Infeasible, before));
    }
    if after < before {
        return Ok(report(vars.ris.clone(), BlockStatus::Kept, before));
    }
    Ok(report(projected.map(|z| z.conj()), BlockStatus::Updated, after))
}
