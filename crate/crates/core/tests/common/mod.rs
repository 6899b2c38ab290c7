//! Reference implementations for the integration tests. They follow the model definitions
//! directly and share no code with the library beyond its data types.

#![allow(dead_code)]

use std::f64::consts::PI;

use dfrc_core::geometry::{ChannelState, Direction, Position2D, RadarGeometry};
use dfrc_core::linalg::{CMatrix, CVector, C64};
use rand::Rng;
use rand_distr::StandardNormal;

/// `e^{i 2π/λ (x sinθ cosφ + y cosθ)}` for every element.
pub fn steer(dir: Direction, pos: &[Position2D], wavelength: f64) -> CVector {
    let (th, ph) = (dir.elevation, dir.azimuth);
    CVector::from_iterator(
        pos.len(),
        pos.iter().map(|p| {
            let rho = p.x * th.sin() * ph.cos() + p.y * th.cos();
            C64::from_polar(1.0, 2.0 * PI / wavelength * rho)
        }),
    )
}

/// `CN(0, 1)`
pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(h * rng.sample::<f64, _>(StandardNormal), h * rng.sample::<f64, _>(StandardNormal))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random beamformers at exactly `power`.
pub fn random_beamformers<R: Rng>(rng: &mut R, n: usize, k: usize, power: f64) -> CMatrix {
    let w = random_matrix(rng, n, k);
    let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    w * C64::new((power / norm).sqrt(), 0.0)
}

/// Uniform points in the square with pairwise distance at least `min_distance`.
pub fn random_layout<R: Rng>(rng: &mut R, n: usize, half: f64, min_distance: f64) -> Vec<Position2D> {
    loop {
        let mut pts: Vec<Position2D> = Vec::new();
        for _ in 0..10_000 {
            let p = Position2D::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
            if pts.iter().all(|q| ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt() >= min_distance) {
                pts.push(p);
                if pts.len() == n {
                    return pts;
                }
            }
        }
    }
}

/// `Ξ = Σ_q ω_q a_qʳ a_qʳᴴ` as `(ω_q, a_qʳ)` with `ω_q = ζ_q² |a_qᵗᴴ W|²`.
pub fn clutter_terms(radar: &RadarGeometry, rx: &[Position2D], tx: &[Position2D], w: &CMatrix, wavelength: f64) -> Vec<(f64, CVector)> {
    radar
        .clutter
        .iter()
        .zip(&radar.clutter_power)
        .map(|(d, p)| (p * (w.adjoint() * steer(*d, tx, wavelength)).norm_squared(), steer(*d, rx, wavelength)))
        .collect()
}

pub fn target_response(radar: &RadarGeometry, rx: &[Position2D], tx: &[Position2D], wavelength: f64) -> CMatrix {
    steer(radar.target, rx, wavelength) * steer(radar.target, tx, wavelength).adjoint()
}

/// `Γ_r = ζ₀² tr(Wᴴ A₀ᴴ (Ξ + σ_r² I)⁻¹ A₀ W)`.
///
/// With `Ξ = BBᴴ` and the thin QR `B = QR`,
/// `(Ξ + σ²I)⁻¹ = (I − QQᴴ)/σ² + Q (RRᴴ + σ²I)⁻¹ Qᴴ`; no step subtracts quantities of the
/// clutter-to-noise scale, so the result stays accurate when a plain solve would not.
pub fn radar_sinr(radar: &RadarGeometry, rx: &[Position2D], tx: &[Position2D], w: &CMatrix, wavelength: f64) -> f64 {
    let terms = clutter_terms(radar, rx, tx, w, wavelength);
    let n = rx.len();
    let b = CMatrix::from_fn(n, terms.len(), |i, q| terms[q].1[i] * terms[q].0.sqrt());
    let qr = b.qr();
    let (q, r) = (qr.q(), qr.r());
    let inner = &r * r.adjoint() + CMatrix::identity(r.nrows(), r.nrows()) * C64::new(radar.noise, 0.0);
    let y = target_response(radar, rx, tx, wavelength) * w;
    let qy = q.adjoint() * &y;
    let outside = &y - &q * &qy;
    let inside = qy.adjoint() * inner.lu().solve(&qy).expect("capacitance is nonsingular");
    radar.target_power * (outside.norm_squared() / radar.noise + inside.trace().re)
}

/// Instantaneous SINR of filter `u` for the snapshot `x = W s`:
/// `ζ₀² |uᴴ A₀ W s|² / (σ² ‖u‖² + Σ_q ω_q |a_qʳᴴ u|²)`.
pub fn filter_sinr(
    radar: &RadarGeometry,
    rx: &[Position2D],
    tx: &[Position2D],
    w: &CMatrix,
    s: &CVector,
    u: &CVector,
    wavelength: f64,
) -> f64 {
    let signal = u.dotc(&(target_response(radar, rx, tx, wavelength) * (w * s))).norm_sqr();
    let mut denom = radar.noise * u.norm_squared();
    for (omega, a) in clutter_terms(radar, rx, tx, w, wavelength) {
        denom += omega * a.dotc(u).norm_sqr();
    }
    radar.target_power * signal / denom
}

/// Λ-dependent radar surrogate as a function of one array, from its definition:
/// `2Re{bᴴ a₀} − Σ_q c_q a_qᴴ D a_q`.
pub struct PositionObjective {
    pub b: CVector,
    pub c: Vec<f64>,
    pub d: CMatrix,
    pub radar: RadarGeometry,
    pub wavelength: f64,
}

impl PositionObjective {
    /// Moving the transmit array: `b = ζ₀² W Λᴴ a₀ʳ`, `c_q = ζ₀²ζ_q² ‖Λᴴ a_qʳ‖²`, `D = WWᴴ`.
    pub fn transmit(radar: &RadarGeometry, rx: &[Position2D], w: &CMatrix, lam: &CMatrix, wavelength: f64) -> Self {
        let z0 = radar.target_power;
        Self {
            b: w * (lam.adjoint() * steer(radar.target, rx, wavelength)) * C64::new(z0, 0.0),
            c: radar
                .clutter
                .iter()
                .zip(&radar.clutter_power)
                .map(|(d, p)| z0 * p * (lam.adjoint() * steer(*d, rx, wavelength)).norm_squared())
                .collect(),
            d: w * w.adjoint(),
            radar: radar.clone(),
            wavelength,
        }
    }

    /// Moving the receive array: the roles of W and Λ swap.
    pub fn receive(radar: &RadarGeometry, tx: &[Position2D], w: &CMatrix, lam: &CMatrix, wavelength: f64) -> Self {
        let z0 = radar.target_power;
        Self {
            b: lam * (w.adjoint() * steer(radar.target, tx, wavelength)) * C64::new(z0, 0.0),
            c: radar
                .clutter
                .iter()
                .zip(&radar.clutter_power)
                .map(|(d, p)| z0 * p * (w.adjoint() * steer(*d, tx, wavelength)).norm_squared())
                .collect(),
            d: lam * lam.adjoint(),
            radar: radar.clone(),
            wavelength,
        }
    }

    pub fn value(&self, pos: &[Position2D]) -> f64 {
        let a0 = steer(self.radar.target, pos, self.wavelength);
        let mut v = 2.0 * self.b.dotc(&a0).re;
        for (q, dir) in self.radar.clutter.iter().enumerate() {
            let a = steer(*dir, pos, self.wavelength);
            v -= self.c[q] * a.dotc(&(&self.d * &a)).re;
        }
        v
    }
}

/// BS-side field response `G(t̃)`, L × N.
pub fn bs_response(ch: &ChannelState, tx: &[Position2D]) -> CMatrix {
    let cols: Vec<CVector> = ch.bs_ris.bs_paths.iter().map(|d| steer(*d, tx, ch.wavelength)).collect();
    CMatrix::from_fn(cols.len(), tx.len(), |l, n| cols[l][n])
}

/// `a_k = Σᴴ F Vᴴ h_k`, so that `h_kᴴ V H(t̃) w = a_kᴴ G(t̃) w`.
pub fn path_weights(ch: &ChannelState, ris: &CVector, k: usize) -> CVector {
    let vh = CVector::from_fn(ris.len(), |m, _| ris[m].conj() * ch.users[k].channel[m]);
    let fv = &ch.bs_ris.ris_frm * vh;
    CVector::from_fn(fv.len(), |l, _| ch.bs_ris.prm[l].conj() * fv[l])
}

/// `Γ_k = |h_kᴴ V H w_k|² / (Σ_{j≠k} |h_kᴴ V H w_j|² + σ²)` through `H = Fᴴ Σ G(t̃)`.
pub fn comm_sinrs(ch: &ChannelState, w: &CMatrix, ris: &CVector, tx: &[Position2D], noise: f64) -> Vec<f64> {
    let g = bs_response(ch, tx);
    (0..ch.users.len())
        .map(|k| {
            let row = path_weights(ch, ris, k).adjoint() * &g * w;
            let signal = row[k].norm_sqr();
            let other: f64 = (0..w.ncols()).filter(|&j| j != k).map(|j| row[j].norm_sqr()).sum();
            signal / (other + noise)
        })
        .collect()
}

/// `f_k(t̃) = γ Σ_{j≠k} |a_kᴴ G w_j|² − |a_kᴴ G w_k|²`.
pub fn qos_function(ch: &ChannelState, w: &CMatrix, ris: &CVector, k: usize, qos: f64, tx: &[Position2D]) -> f64 {
    let row = path_weights(ch, ris, k).adjoint() * bs_response(ch, tx) * w;
    (0..w.ncols())
        .map(|j| if j == k { -row[j].norm_sqr() } else { qos * row[j].norm_sqr() })
        .sum()
}

pub fn flatten(pos: &[Position2D]) -> Vec<f64> {
    pos.iter().flat_map(|p| [p.x, p.y]).collect()
}

pub fn unflatten(x: &[f64]) -> Vec<Position2D> {
    x.chunks(2).map(|c| Position2D::new(c[0], c[1])).collect()
}

/// Central differences with step `h` on every coordinate.
pub fn central_difference(f: impl Fn(&[Position2D]) -> f64, pos: &[Position2D], h: f64) -> Vec<f64> {
    let x = flatten(pos);
    (0..x.len())
        .map(|i| {
            let mut p = x.clone();
            p[i] += h;
            let up = f(&unflatten(&p));
            p[i] -= 2.0 * h;
            let down = f(&unflatten(&p));
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// `‖a − b‖∞ / ‖b‖∞`
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    num / den
}

pub fn min_distance(pos: &[Position2D]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..pos.len() {
        for j in i + 1..pos.len() {
            d = d.min(((pos[i].x - pos[j].x).powi(2) + (pos[i].y - pos[j].y).powi(2)).sqrt());
        }
    }
    d
}
