//! Transmit beamformer block.
//!
//! With the auxiliary matrix Λ fixed, the fractional-programming surrogate of the radar SINR
//! is a concave quadratic in W. The communication SINR constraints are non-convex, so each
//! one is replaced by its first-order under-estimator around the current point and the
//! resulting QCQP is solved repeatedly (SCA).
//!
//! Internally the beamformers are scaled by `1/√P_t` and every SINR constraint is divided by
//! the user's noise power, so the lifted problem is O(1) regardless of the link budget.

use crate::block::{BlockOutcome, BlockStatus};
use crate::config::ScenarioConfig;
use crate::convex::{solve, ComplexLift, ConvexQCQP, QuadForm, Quadratic, SolveStatus, FEAS_TOL};
use crate::error::Result;
use crate::geometry::ChannelState;
use crate::linalg::{fro2, inner, outer, CMatrix, CVector, RVector, C64};
use crate::metrics::{comm_sinrs, real_trace_inner, DesignVariables, RadarArrays};

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingConfig {
    pub max_inner: usize,
    /// Relative change of the surrogate objective that ends the SCA loop.
    pub inner_tol: f64,
    pub solver_tol: f64,
}

impl Default for BeamformingConfig {
    fn default() -> Self {
        Self {
            max_inner: 10,
            inner_tol: 1e-4,
            solver_tol: 1e-10,
        }
    }
}

/// `g_k = Hᴴ Vᴴ h_k`, so that `h_kᴴ V H w = g_kᴴ w` and `H̃_k = g_k g_kᴴ`.
pub fn effective_channels(ch: &ChannelState, ris: &CVector, tx: &[crate::geometry::Position2D]) -> Vec<CVector> {
    let h = ch.bs_ris_channel(tx);
    ch.users
        .iter()
        .map(|u| {
            let vh = CVector::from_fn(ris.len(), |m, _| ris[m].conj() * u.channel[m]);
            h.adjoint() * vh
        })
        .collect()
}

/// `2Re{(w_k^(l))ᴴ H̃_k w_k} − (w_k^(l))ᴴ H̃_k w_k^(l)`: linear under-estimator of `|g_kᴴ w_k|²`.
pub fn qos_surrogate_value(expansion: &CVector, effective: &CVector, w: &CVector) -> f64 {
    let a = inner(effective, expansion);
    let b = inner(effective, w);
    2.0 * (a.conj() * b).re - a.norm_sqr()
}

/// Index map of column `k` of an `N × K` beamformer in the lifted vector.
fn column(n: usize, k: usize) -> ComplexLift {
    ComplexLift::new(2 * n * k, n)
}

/// Convexified SINR constraint of user `k` in `≤ 0` form, over `u = W / scale`, divided by σ_k².
pub fn sca_qos_constraint(
    k: usize,
    expansion: &CMatrix,
    effective: &CVector,
    qos: f64,
    noise: f64,
    scale: f64,
) -> Result<Quadratic> {
    let (n, users) = expansion.shape();
    let mut q = Quadratic::zero(2 * n * users);
    let h = outer(effective, effective) * C64::new(qos * scale * scale / noise, 0.0);
    for j in (0..users).filter(|&j| j != k) {
        q.quad.push(column(n, j).hermitian_form(&h)?);
    }
    let wl = expansion.column(k).into_owned();
    let a = inner(effective, &wl);
    column(n, k).add_real_inner(&(effective * a), -2.0 * scale / noise, &mut q.linear);
    q.constant = qos + a.norm_sqr() / noise;
    Ok(q)
}

/// Data of the W-subproblem with Λ, positions and RIS phases fixed.
#[derive(Debug, Clone)]
pub struct BeamformingSubproblem {
    /// g_k per user.
    pub effective: Vec<CVector>,
    /// `ζ₀² A₀ᴴ Λ`
    pub target_term: CMatrix,
    /// `ζ₀² Σ_q ζ_q² ‖Λᴴ a_qʳ‖² a_qᵗ a_qᵗᴴ`
    pub clutter_quad: CMatrix,
    /// `ζ₀² σ_r² ‖Λ‖²`
    pub noise_term: f64,
    pub power_budget: f64,
    pub qos: f64,
    pub user_noise: f64,
}

impl BeamformingSubproblem {
    pub fn new(ch: &ChannelState, vars: &DesignVariables, cfg: &ScenarioConfig) -> Self {
        let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
        let z0 = ch.radar.target_power;
        let lam = &vars.aux;
        let target_term = &arrays.target_tx * (arrays.target_rx.adjoint() * lam) * C64::new(z0, 0.0);
        let n = vars.tx.len();
        let mut clutter_quad = CMatrix::zeros(n, n);
        for q in 0..arrays.clutter_rx.len() {
            let load = z0 * ch.radar.clutter_power[q] * (lam.adjoint() * &arrays.clutter_rx[q]).norm_squared();
            clutter_quad += outer(&arrays.clutter_tx[q], &arrays.clutter_tx[q]) * C64::new(load, 0.0);
        }
        Self {
            effective: effective_channels(ch, &vars.ris, &vars.tx),
            target_term,
            clutter_quad,
            noise_term: z0 * ch.radar.noise * fro2(lam),
            power_budget: cfg.power_budget,
            qos: cfg.qos,
            user_noise: cfg.user_noise,
        }
    }

    /// The surrogate Γ̂_r at W (with the stored Λ).
    pub fn objective(&self, w: &CMatrix) -> f64 {
        let quad: f64 = (0..w.ncols())
            .map(|k| {
                let wk = w.column(k).into_owned();
                inner(&wk, &(&self.clutter_quad * &wk)).re
            })
            .sum();
        2.0 * real_trace_inner(w, &self.target_term) - quad - self.noise_term
    }

    fn scale(&self) -> f64 {
        self.power_budget.sqrt()
    }

    fn qos_constraints(&self, expansion: &CMatrix) -> Result<Vec<Quadratic>> {
        (0..expansion.ncols())
            .map(|k| sca_qos_constraint(k, expansion, &self.effective[k], self.qos, self.user_noise, self.scale()))
            .collect()
    }

    /// SCA subproblem around `expansion`: maximize Γ̂_r subject to surrogate QoS and power.
    pub fn qcqp(&self, expansion: &CMatrix) -> Result<ConvexQCQP> {
        let (n, users) = expansion.shape();
        let s = self.scale();
        let norm = self
            .objective(expansion)
            .abs()
            .max(2.0 * s * self.target_term.norm())
            .max(f64::MIN_POSITIVE);
        let mut obj = Quadratic::zero(2 * n * users);
        obj.constant = -self.noise_term / norm;
        let neg = &self.clutter_quad * C64::new(-s * s / norm, 0.0);
        for k in 0..users {
            let col = column(n, k);
            obj.quad.push(col.hermitian_form(&neg)?);
            col.add_real_inner(&self.target_term.column(k).into_owned(), 2.0 * s / norm, &mut obj.linear);
        }
        let mut cons = self.qos_constraints(expansion)?;
        cons.push(power_ball(2 * n * users));
        ConvexQCQP::new(obj, cons, None)
    }
}

/// `‖u‖² ≤ 1`
fn power_ball(dim: usize) -> Quadratic {
    Quadratic::linear(RVector::zeros(dim), -1.0).with_quad(QuadForm::scaled_identity((0..dim).collect(), 1.0))
}

fn lift(w: &CMatrix, scale: f64) -> Vec<f64> {
    let (n, users) = w.shape();
    let mut x = vec![0.0; 2 * n * users];
    for k in 0..users {
        column(n, k).write(&(w.column(k).into_owned() / C64::new(scale, 0.0)), &mut x);
    }
    x
}

fn unlift(x: &[f64], n: usize, users: usize, scale: f64) -> CMatrix {
    let mut w = CMatrix::zeros(n, users);
    for k in 0..users {
        w.set_column(k, &(column(n, k).read(x) * C64::new(scale, 0.0)));
    }
    w
}

/// Smallest `Γ_k − γ` over users.
fn qos_margin(ch: &ChannelState, vars: &DesignVariables, w: &CMatrix, cfg: &ScenarioConfig) -> f64 {
    comm_sinrs(ch, w, &vars.ris, &vars.tx, cfg.user_noise)
        .into_iter()
        .map(|g| g - cfg.qos)
        .fold(f64::INFINITY, f64::min)
}

/// SCA on the beamforming subproblem. Never returns a W with a smaller surrogate objective
/// than the input, nor one that breaks the power budget or the true SINR constraints.
pub fn update_beamforming(
    vars: &DesignVariables,
    ch: &ChannelState,
    cfg: &ScenarioConfig,
    opts: &BeamformingConfig,
) -> Result<BlockOutcome<CMatrix>> {
    let sub = BeamformingSubproblem::new(ch, vars, cfg);
    let w_in = &vars.beamformers;
    let (n, users) = w_in.shape();
    let s = sub.scale();
    let f_in = sub.objective(w_in);

    let mut w = w_in.clone();
    let mut f = f_in;
    let mut iterations = 0;
    for _ in 0..opts.max_inner {
        let p = sub.qcqp(&w)?;
        let report = solve(&p, opts.solver_tol, Some(&lift(&w, s)));
        iterations += 1;
        let usable = report.status == SolveStatus::Optimal
            || (report.status == SolveStatus::MaxIter && report.max_violation <= FEAS_TOL);
        if !usable {
            if iterations == 1 {
                return Ok(BlockOutcome::kept(w_in.clone(), BlockStatus::Infeasible, iterations));
            }
            break;
        }
        let cand = unlift(&report.x, n, users, s);
        let f_c = sub.objective(&cand);
        if f_c < f {
            break;
        }
        let change = f_c - f;
        w = cand;
        f = f_c;
        if change <= opts.inner_tol * f.abs() {
            break;
        }
    }

    let power_ok = fro2(&w) <= cfg.power_budget + 1e-9;
    let qos_ok = qos_margin(ch, vars, &w, cfg) >= (-1e-6f64).min(qos_margin(ch, vars, w_in, cfg));
    if f < f_in || !power_ok || !qos_ok {
        return Ok(BlockOutcome::kept(w_in.clone(), BlockStatus::Kept, iterations));
    }
    let status = if &w == w_in { BlockStatus::Kept } else { BlockStatus::Updated };
    Ok(BlockOutcome::kept(w, status, iterations))
}

/// Minimum-power beamformers meeting every SINR target, found by SCA from `vars.beamformers`.
/// Fails with [`crate::DfrcError::Infeasible`] if the targets cannot be met within P_t.
pub fn repair_qos(vars: &DesignVariables, ch: &ChannelState, cfg: &ScenarioConfig) -> Result<CMatrix> {
    let sub = BeamformingSubproblem::new(ch, vars, cfg);
    let (n, users) = vars.beamformers.shape();
    let dim = 2 * n * users;
    let s = sub.scale();
    let objective = Quadratic::zero(dim).with_quad(QuadForm::scaled_identity((0..dim).collect(), -1.0));

    let mut w = vars.beamformers.clone();
    let mut power = f64::INFINITY;
    for _ in 0..50 {
        let p = ConvexQCQP::new(objective.clone(), sub.qos_constraints(&w)?, None)?;
        let report = solve(&p, 1e-10, Some(&lift(&w, s)));
        match report.status {
            SolveStatus::Optimal => {}
            SolveStatus::MaxIter if report.max_violation <= FEAS_TOL => {}
            _ => break,
        }
        w = unlift(&report.x, n, users, s);
        let next = fro2(&w);
        let done = (power - next).abs() <= 1e-9 * next;
        power = next;
        if done {
            break;
        }
    }
    if !(power <= cfg.power_budget) {
        return Err(crate::DfrcError::Infeasible(format!(
            "SINR targets need {:.3e} W, budget is {:.3e} W",
            power, cfg.power_budget
        )));
    }
    if qos_margin(ch, vars, &w, cfg) < -1e-6 {
        return Err(crate::DfrcError::Infeasible("SINR targets not reachable".into()));
    }
    Ok(w)
}

/// `(I + Σ_j λ_j h̃_j h̃_jᴴ)` for noise-normalized channels.
fn uplink_covariance(normalized: &[CVector], lambda: &[f64]) -> CMatrix {
    let n = normalized[0].len();
    let mut c = CMatrix::identity(n, n);
    for (h, l) in normalized.iter().zip(lambda) {
        c += outer(h, h) * C64::new(*l, 0.0);
    }
    c
}

/// Globally minimum-power beamformers with `Γ_k = γ` for every user, via the uplink–downlink
/// duality fixed point. `None` if the targets need more than `budget` or are unreachable.
pub fn min_power_beamformers(effective: &[CVector], noise: f64, qos: f64, budget: f64) -> Option<CMatrix> {
    let users = effective.len();
    let n = effective.first()?.len();
    let sigma = noise.sqrt();
    let h: Vec<CVector> = effective.iter().map(|g| g / C64::new(sigma, 0.0)).collect();
    let mut lambda = vec![0.0; users];
    let mut converged = false;
    for _ in 0..2000 {
        let chol = uplink_covariance(&h, &lambda).cholesky()?;
        let next: Vec<f64> = h
            .iter()
            .map(|hk| qos / ((1.0 + qos) * inner(hk, &chol.solve(hk)).re))
            .collect();
        let total: f64 = next.iter().sum();
        if !total.is_finite() || total > budget * (1.0 + 1e-9) {
            return None;
        }
        let change = next.iter().zip(&lambda).map(|(a, b)| (a - b).abs()).sum::<f64>();
        lambda = next;
        if change <= 1e-13 * total {
            converged = true;
            break;
        }
    }
    if !converged {
        return None;
    }
    let chol = uplink_covariance(&h, &lambda).cholesky()?;
    let dirs: Vec<CVector> = h.iter().map(|hk| chol.solve(hk).normalize()).collect();
    let a = crate::linalg::RMatrix::from_fn(users, users, |k, j| {
        let g = inner(&h[k], &dirs[j]).norm_sqr();
        if k == j {
            g / qos
        } else {
            -g
        }
    });
    let p = a.lu().solve(&RVector::from_element(users, 1.0))?;
    if p.iter().any(|&x| !(x > 0.0)) || p.sum() > budget * (1.0 + 1e-9) {
        return None;
    }
    let mut w = CMatrix::zeros(n, users);
    for k in 0..users {
        w.set_column(k, &(&dirs[k] * C64::new(p[k].sqrt(), 0.0)));
    }
    Some(w)
}

/// Beamformers maximizing the smallest SINR at full power (bisection on the common target),
/// together with that SINR.
pub fn max_min_sinr_beamformers(effective: &[CVector], noise: f64, budget: f64) -> Option<(CMatrix, f64)> {
    let (mut lo, mut hi) = (-60.0f64, 80.0f64);
    let mut best = None;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match min_power_beamformers(effective, noise, crate::linalg::db_to_linear(mid), budget) {
            Some(w) => {
                best = Some((w, crate::linalg::db_to_linear(mid)));
                lo = mid;
            }
            None => hi = mid,
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    let (mut w, g) = best?;
    w *= C64::new((budget / fro2(&w)).sqrt(), 0.0);
    Some((w, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{complex_gaussian, planar_grid, sample_channels};
    use crate::linalg::{cis, db_to_linear, dbm_to_watts};
    use crate::metrics::{fp_objective, optimal_lambda};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> CVector {
        CVector::from_fn(n, |_, _| complex_gaussian(rng, 1.0))
    }

    /// Desk scenario with enough power that a random RIS still admits the SINR targets.
    fn desk() -> ScenarioConfig {
        ScenarioConfig {
            power_budget: dbm_to_watts(40.0),
            ..ScenarioConfig::desk()
        }
    }

    /// First draw at or after `seed` whose SINR targets are reachable with a random RIS.
    fn setup(seed: u64, cfg: &ScenarioConfig) -> (ChannelState, DesignVariables) {
        (seed..seed + 50).find_map(|s| try_setup(s, cfg)).expect("no feasible draw")
    }

    fn try_setup(seed: u64, cfg: &ScenarioConfig) -> Option<(ChannelState, DesignVariables)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = sample_channels(&mut rng, cfg);
        let tx = planar_grid(cfg.antennas, cfg.wavelength / 2.0);
        let ris = CVector::from_fn(cfg.ris_elements, |_, _| cis(rng.gen_range(0.0..std::f64::consts::TAU)));
        let g = effective_channels(&ch, &ris, &tx);
        let mut w = CMatrix::zeros(cfg.antennas, cfg.users);
        for k in 0..cfg.users {
            w.set_column(k, &g[k]);
        }
        w *= C64::new((cfg.power_budget / fro2(&w)).sqrt(), 0.0);
        let mut vars = DesignVariables {
            beamformers: w,
            ris,
            rx: tx.clone(),
            tx,
            aux: CMatrix::zeros(cfg.antennas, cfg.users),
        };
        vars.beamformers = repair_qos(&vars, &ch, cfg).ok()?;
        let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
        vars.aux = optimal_lambda(&arrays, &vars.beamformers).unwrap();
        Some((ch, vars))
    }

    #[test]
    fn surrogate_exact_at_expansion_and_below_elsewhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_vec(&mut rng, 4);
        let wl = random_vec(&mut rng, 4);
        let exact = inner(&g, &wl).norm_sqr();
        assert!((qos_surrogate_value(&wl, &g, &wl) - exact).abs() <= 1e-10 * exact);
        for _ in 0..1000 {
            let w = random_vec(&mut rng, 4) * C64::new(rng.gen_range(0.0..3.0), 0.0);
            assert!(qos_surrogate_value(&wl, &g, &w) <= inner(&g, &w).norm_sqr() + 1e-12);
        }
    }

    #[test]
    fn surrogate_constraint_matches_true_constraint_at_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (n, users, gamma, noise, scale) = (3, 2, 4.0, 0.3, 1.7);
        let w = CMatrix::from_fn(n, users, |_, _| complex_gaussian(&mut rng, 1.0));
        let g = random_vec(&mut rng, n);
        for k in 0..users {
            let q = sca_qos_constraint(k, &w, &g, gamma, noise, scale).unwrap();
            let value = q.value(&lift(&w, scale));
            let interference: f64 = (0..users).filter(|&j| j != k).map(|j| inner(&g, &w.column(j).into_owned()).norm_sqr()).sum();
            let truth = (gamma * (interference + noise) - inner(&g, &w.column(k).into_owned()).norm_sqr()) / noise;
            assert!((value - truth).abs() <= 1e-10 * truth.abs().max(1.0));
        }
    }

    #[test]
    fn zero_channel_constraint_is_infeasible() {
        let w = CMatrix::from_element(2, 1, C64::new(1.0, 0.0));
        let q = sca_qos_constraint(0, &w, &CVector::zeros(2), 10.0, 1.0, 1.0).unwrap();
        let p = ConvexQCQP::new(Quadratic::zero(4), vec![q], None).unwrap();
        assert_eq!(solve(&p, 1e-9, None).status, SolveStatus::Infeasible);
    }

    #[test]
    fn single_user_without_clutter_aligns_with_linear_term() {
        let mut cfg = desk();
        cfg.users = 1;
        cfg.clutter.clear();
        cfg.qos = 1e-9;
        let (ch, vars) = setup(3, &cfg);
        let out = update_beamforming(&vars, &ch, &cfg, &BeamformingConfig::default()).unwrap();
        let sub = BeamformingSubproblem::new(&ch, &vars, &cfg);
        let c = sub.target_term.column(0).into_owned();
        let expected = &c * C64::new(cfg.power_budget.sqrt() / c.norm(), 0.0);
        let w = out.value.column(0).into_owned();
        assert!((w - &expected).norm() <= 1e-6 * expected.norm());
    }

    #[test]
    fn monotone_and_feasible() {
        let cfg = desk();
        for seed in 0..4 {
            let (ch, vars) = setup(10 + seed, &cfg);
            let sub = BeamformingSubproblem::new(&ch, &vars, &cfg);
            let before = sub.objective(&vars.beamformers);
            let out = update_beamforming(&vars, &ch, &cfg, &BeamformingConfig::default()).unwrap();
            let after = sub.objective(&out.value);
            assert!(after >= before - 1e-8 * before.abs());
            assert!(fro2(&out.value) <= cfg.power_budget + 1e-9);
            for g in comm_sinrs(&ch, &out.value, &vars.ris, &vars.tx, cfg.user_noise) {
                assert!(g >= cfg.qos - 1e-6, "{g}");
            }
            // the stored objective is the FP surrogate
            let arrays = RadarArrays::new(&ch.radar, &vars.rx, &vars.tx, ch.wavelength);
            let fp = fp_objective(&arrays, &out.value, &vars.aux).unwrap();
            assert!((fp - after).abs() <= 1e-9 * fp.abs());
        }
    }

    #[test]
    fn relaxing_qos_never_hurts() {
        let cfg = desk();
        let (ch, vars) = setup(21, &cfg);
        let strict = update_beamforming(&vars, &ch, &cfg, &BeamformingConfig::default()).unwrap();
        let mut loose = cfg.clone();
        loose.qos = 1e-9;
        let relaxed = update_beamforming(&vars, &ch, &loose, &BeamformingConfig::default()).unwrap();
        let sub = BeamformingSubproblem::new(&ch, &vars, &cfg);
        assert!(sub.objective(&relaxed.value) >= sub.objective(&strict.value) * (1.0 - 1e-8));
    }

    #[test]
    fn optimal_input_is_a_fixed_point() {
        let cfg = desk();
        let (ch, mut vars) = setup(22, &cfg);
        let opts = BeamformingConfig {
            max_inner: 200,
            inner_tol: 1e-14,
            ..BeamformingConfig::default()
        };
        vars.beamformers = update_beamforming(&vars, &ch, &cfg, &opts).unwrap().value;
        let again = update_beamforming(&vars, &ch, &cfg, &opts).unwrap().value;
        let rel = (&again - &vars.beamformers).norm() / vars.beamformers.norm();
        assert!(rel <= 1e-6, "{rel}");
    }

    #[test]
    fn repair_reaches_targets() {
        let mut cfg = desk();
        cfg.qos = db_to_linear(15.0);
        let (ch, vars) = setup(23, &cfg);
        for g in comm_sinrs(&ch, &vars.beamformers, &vars.ris, &vars.tx, cfg.user_noise) {
            assert!(g >= cfg.qos * (1.0 - 1e-6));
        }
        assert!(fro2(&vars.beamformers) <= cfg.power_budget);
    }

    #[test]
    fn duality_beamformers_are_minimal_and_exact() {
        let cfg = desk();
        for seed in 0..5 {
            let Some((ch, vars)) = try_setup(100 + seed, &cfg) else { continue };
            let g = effective_channels(&ch, &vars.ris, &vars.tx);
            let w = min_power_beamformers(&g, cfg.user_noise, cfg.qos, cfg.power_budget).unwrap();
            for s in comm_sinrs(&ch, &w, &vars.ris, &vars.tx, cfg.user_noise) {
                assert!((s - cfg.qos).abs() <= 1e-8 * cfg.qos, "{s}");
            }
            // the SCA repair is a local method: it cannot beat the global minimum
            assert!(fro2(&w) <= fro2(&vars.beamformers) * (1.0 + 1e-6));
            assert!(min_power_beamformers(&g, cfg.user_noise, cfg.qos, fro2(&w) * 0.99).is_none());

            let (wm, gm) = max_min_sinr_beamformers(&g, cfg.user_noise, cfg.power_budget).unwrap();
            assert!((fro2(&wm) - cfg.power_budget).abs() <= 1e-9 * cfg.power_budget);
            let sinrs = comm_sinrs(&ch, &wm, &vars.ris, &vars.tx, cfg.user_noise);
            let lo = sinrs.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(lo >= gm * (1.0 - 1e-6) && lo >= cfg.qos);
        }
    }

    #[test]
    fn collinear_users_are_infeasible() {
        let g = vec![CVector::from_element(2, C64::new(1.0, 0.0)); 2];
        assert!(min_power_beamformers(&g, 1.0, 2.0, 1e12).is_none());
        // a single user needs exactly γσ²/‖g‖²
        let w = min_power_beamformers(&g[..1], 1.0, 2.0, 10.0).unwrap();
        assert!((fro2(&w) - 1.0).abs() < 1e-12);
    }
}
