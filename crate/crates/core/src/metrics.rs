//! Communication and radar performance metrics, plus the fractional-programming surrogate
//! of the radar SINR and its closed-form auxiliary maximizer.
//!
//! The echo covariance `Ξ + σ_r² I` is never inverted explicitly. Because every clutter
//! response is rank one, `Ξ = Σ_q ω_q a_q a_qᴴ` with `ω_q = ζ_q² ‖Wᴴ a_qᵗ‖²`, and solves go
//! through the `Q × Q` Hermitian capacitance matrix `σ_r² I + GᴴG` (Cholesky). This keeps
//! the quadratic `tr(Λᴴ(Ξ + σ_r² I)Λ)` a sum of non-negative terms, which matters when the
//! clutter is many orders of magnitude above the noise floor.

use nalgebra::Cholesky;

use crate::error::{DfrcError, Result};
use crate::geometry::{steering_vector, ChannelState, Position2D, RadarGeometry};
use crate::linalg::{fro2, inner, outer, CMatrix, CVector, C64};

/// The optimization variables of one design.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVariables {
    /// W, N × K; column k is w_k.
    pub beamformers: CMatrix,
    /// Reflection coefficients, the diagonal of V.
    pub ris: CVector,
    pub tx: Vec<Position2D>,
    pub rx: Vec<Position2D>,
    /// Λ, N × K.
    pub aux: CMatrix,
}

impl DesignVariables {
    pub fn transmit_power(&self) -> f64 {
        fro2(&self.beamformers)
    }

    pub fn max_modulus_violation(&self) -> f64 {
        self.ris.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// `g_{k,j} = h_kᴴ V H(t̃) w_j` for all user/stream pairs (K × K).
pub fn effective_gains(ch: &ChannelState, w: &CMatrix, ris: &CVector, tx: &[Position2D]) -> CMatrix {
    let hw = ch.bs_ris_channel(tx) * w;
    CMatrix::from_fn(ch.user_count(), w.ncols(), |k, j| {
        let h = &ch.users[k].channel;
        (0..ris.len()).map(|m| h[m].conj() * ris[m] * hw[(m, j)]).sum()
    })
}

/// Γ_k for every user.
pub fn comm_sinrs(ch: &ChannelState, w: &CMatrix, ris: &CVector, tx: &[Position2D], noise: f64) -> Vec<f64> {
    let g = effective_gains(ch, w, ris, tx);
    (0..g.nrows())
        .map(|k| {
            let signal = g[(k, k)].norm_sqr();
            let interference: f64 = (0..g.ncols()).filter(|&j| j != k).map(|j| g[(k, j)].norm_sqr()).sum();
            signal / (interference + noise)
        })
        .collect()
}

pub fn comm_sinr(k: usize, ch: &ChannelState, w: &CMatrix, ris: &CVector, tx: &[Position2D], noise: f64) -> f64 {
    comm_sinrs(ch, w, ris, tx, noise)[k]
}

/// Steering vectors of the target and every clutter patch for one transmit/receive layout.
#[derive(Debug, Clone)]
pub struct RadarArrays<'a> {
    pub radar: &'a RadarGeometry,
    pub target_rx: CVector,
    pub target_tx: CVector,
    pub clutter_rx: Vec<CVector>,
    pub clutter_tx: Vec<CVector>,
}

impl<'a> RadarArrays<'a> {
    pub fn new(radar: &'a RadarGeometry, rx: &[Position2D], tx: &[Position2D], wavelength: f64) -> Self {
        Self {
            radar,
            target_rx: steering_vector(radar.target, rx, wavelength),
            target_tx: steering_vector(radar.target, tx, wavelength),
            clutter_rx: radar.clutter.iter().map(|d| steering_vector(*d, rx, wavelength)).collect(),
            clutter_tx: radar.clutter.iter().map(|d| steering_vector(*d, tx, wavelength)).collect(),
        }
    }

    /// A₀
    pub fn target_response(&self) -> CMatrix {
        outer(&self.target_rx, &self.target_tx)
    }

    /// A_q
    pub fn clutter_response(&self, q: usize) -> CMatrix {
        outer(&self.clutter_rx[q], &self.clutter_tx[q])
    }

    /// `A₀ W = a₀ʳ (a₀ᵗᴴ W)`.
    pub fn target_times(&self, w: &CMatrix) -> CMatrix {
        let row = self.target_tx.adjoint() * w;
        &self.target_rx * row
    }
}

/// `Ξ + σ_r² I` in factored form.
#[derive(Debug, Clone)]
pub struct EchoCovariance {
    noise: f64,
    /// Columns `√ω_q a_qʳ`.
    factors: CMatrix,
    capacitance: Option<Cholesky<C64, nalgebra::Dyn>>,
}

impl EchoCovariance {
    pub fn new(arrays: &RadarArrays<'_>, w: &CMatrix) -> Result<Self> {
        let noise = arrays.radar.noise;
        if !(noise > 0.0) {
            return Err(DfrcError::InvalidConfig("radar noise power must be positive".into()));
        }
        let n = arrays.target_rx.len();
        let q = arrays.clutter_rx.len();
        let mut factors = CMatrix::zeros(n, q);
        for i in 0..q {
            let load = arrays.radar.clutter_power[i] * (w.adjoint() * &arrays.clutter_tx[i]).norm_squared();
            factors.set_column(i, &(&arrays.clutter_rx[i] * C64::new(load.sqrt(), 0.0)));
        }
        let capacitance = if q == 0 {
            None
        } else {
            let mut c = factors.adjoint() * &factors;
            for i in 0..q {
                c[(i, i)] += noise;
            }
            Some(
                Cholesky::new(c)
                    .ok_or_else(|| DfrcError::Numerical("capacitance matrix not positive definite".into()))?,
            )
        };
        Ok(Self {
            noise,
            factors,
            capacitance,
        })
    }

    /// `(Ξ + σ_r² I)⁻¹ B`
    pub fn solve(&self, b: &CMatrix) -> CMatrix {
        let inv_noise = C64::new(1.0 / self.noise, 0.0);
        match &self.capacitance {
            None => b * inv_noise,
            Some(chol) => {
                let y = chol.solve(&(self.factors.adjoint() * b));
                (b - &self.factors * y) * inv_noise
            }
        }
    }

    /// `tr(Λᴴ (Ξ + σ_r² I) Λ)`, accumulated from non-negative parts.
    pub fn quadratic_trace(&self, lambda: &CMatrix) -> f64 {
        self.noise * fro2(lambda) + fro2(&(self.factors.adjoint() * lambda))
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.factors.nrows();
        let mut m = &self.factors * self.factors.adjoint();
        for i in 0..n {
            m[(i, i)] += self.noise;
        }
        m
    }
}

/// Ξ, built directly from its defining sum.
pub fn clutter_covariance(arrays: &RadarArrays<'_>, w: &CMatrix) -> CMatrix {
    let n = arrays.target_rx.len();
    let ww = w * w.adjoint();
    let mut xi = CMatrix::zeros(n, n);
    for q in 0..arrays.clutter_rx.len() {
        let a = arrays.clutter_response(q);
        xi += (&a * &ww * a.adjoint()) * C64::new(arrays.radar.clutter_power[q], 0.0);
    }
    xi
}

/// `Λ* = (Ξ + σ_r² I)⁻¹ A₀ W`.
pub fn optimal_lambda(arrays: &RadarArrays<'_>, w: &CMatrix) -> Result<CMatrix> {
    let cov = EchoCovariance::new(arrays, w)?;
    Ok(cov.solve(&arrays.target_times(w)))
}

/// Average radar SINR `tr(Φ W Wᴴ)` with the MVDR receiver folded in.
pub fn radar_sinr(arrays: &RadarArrays<'_>, w: &CMatrix) -> Result<f64> {
    let cov = EchoCovariance::new(arrays, w)?;
    let b = arrays.target_times(w);
    let lambda = cov.solve(&b);
    Ok(arrays.radar.target_power * real_trace_inner(&b, &lambda))
}

/// `Γ̂_r = ζ₀² tr(2Re{Wᴴ A₀ᴴ Λ} − Λᴴ(Ξ + σ_r² I)Λ)`.
pub fn fp_objective(arrays: &RadarArrays<'_>, w: &CMatrix, lambda: &CMatrix) -> Result<f64> {
    let cov = EchoCovariance::new(arrays, w)?;
    let b = arrays.target_times(w);
    Ok(arrays.radar.target_power * (2.0 * real_trace_inner(&b, lambda) - cov.quadratic_trace(lambda)))
}

/// MVDR receive filter `(Ξ + σ_r² I)⁻¹ A₀ x` for the transmitted snapshot `x = W s`.
pub fn mvdr_filter(arrays: &RadarArrays<'_>, w: &CMatrix, symbols: &CVector) -> Result<CVector> {
    let cov = EchoCovariance::new(arrays, w)?;
    let x = w * symbols;
    let ax = arrays.target_response() * x;
    let u = cov.solve(&CMatrix::from_column_slice(ax.len(), 1, ax.as_slice()));
    if u.iter().any(|z| !z.is_finite()) {
        return Err(DfrcError::Numerical("MVDR solve produced non-finite values".into()));
    }
    Ok(u.column(0).into_owned())
}

/// Instantaneous output SINR `ζ₀²|uᴴA₀x|² / uᴴ(Ξ + σ_r² I)u` of an arbitrary filter.
pub fn filter_sinr(arrays: &RadarArrays<'_>, w: &CMatrix, symbols: &CVector, filter: &CVector) -> Result<f64> {
    let cov = EchoCovariance::new(arrays, w)?;
    let x = w * symbols;
    let num = inner(filter, &(arrays.target_response() * x)).norm_sqr();
    let u = CMatrix::from_column_slice(filter.len(), 1, filter.as_slice());
    Ok(arrays.radar.target_power * num / cov.quadratic_trace(&u))
}

/// `Re tr(Aᴴ B)`
pub fn real_trace_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}
