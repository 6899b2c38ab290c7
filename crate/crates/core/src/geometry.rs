//! Far-field geometric channel model for the BS → RIS → user links and the line-of-sight
//! radar links.
//!
//! Every array response here is a function of element positions in a local 2-D frame whose
//! origin is the array reference point. A path with elevation `e` and azimuth `a` sees an
//! element at `(x, y)` with the extra propagation length `x·sin(e)·cos(a) + y·cos(e)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::config::ScenarioConfig;
use crate::error::{DfrcError, Result};
use crate::linalg::{cis, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position2D {
    pub x: f64,
    pub y: f64,
}

impl Position2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position2D) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    pub fn scaled(&self, a: f64) -> Position2D {
        Position2D::new(a * self.x, a * self.y)
    }
}

/// Flattens positions into `[x₁, y₁, x₂, y₂, …]`.
pub fn flatten(positions: &[Position2D]) -> Vec<f64> {
    positions.iter().flat_map(|p| [p.x, p.y]).collect()
}

pub fn unflatten(coords: &[f64]) -> Vec<Position2D> {
    coords.chunks_exact(2).map(|c| Position2D::new(c[0], c[1])).collect()
}

/// Smallest pairwise distance, `+∞` for fewer than two elements.
pub fn min_pairwise_distance(positions: &[Position2D]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, p) in positions.iter().enumerate() {
        for q in &positions[i + 1..] {
            best = best.min(p.distance(q));
        }
    }
    best
}

/// Elevation/azimuth pair of one propagation path, both in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub elevation: f64,
    pub azimuth: f64,
}

impl Direction {
    pub const fn new(elevation: f64, azimuth: f64) -> Self {
        Self { elevation, azimuth }
    }

    pub fn from_degrees(elevation: f64, azimuth: f64) -> Self {
        Self::new(elevation.to_radians(), azimuth.to_radians())
    }

    pub fn in_range(&self) -> bool {
        (0.0..=PI).contains(&self.elevation) && (0.0..=PI).contains(&self.azimuth)
    }

    /// `(∂ρ/∂x, ∂ρ/∂y)`; its norm never exceeds one.
    pub fn wavevector(&self) -> [f64; 2] {
        [
            self.elevation.sin() * self.azimuth.cos(),
            self.elevation.cos(),
        ]
    }

    fn uniform<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(rng.gen_range(0.0..=PI), rng.gen_range(0.0..=PI))
    }
}

/// Extra propagation length of `pos` relative to the array origin along `dir`.
pub fn propagation_diff(pos: Position2D, dir: Direction) -> f64 {
    let [u, w] = dir.wavevector();
    pos.x * u + pos.y * w
}

pub fn wavenumber(wavelength: f64) -> f64 {
    2.0 * PI / wavelength
}

/// Field response of a single element toward each of the given paths.
pub fn field_response_vector(
    pos: Position2D,
    paths: &[Direction],
    wavelength: f64,
) -> Result<CVector> {
    if !(wavelength > 0.0) {
        return Err(DfrcError::InvalidConfig(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    let k = wavenumber(wavelength);
    Ok(CVector::from_iterator(
        paths.len(),
        paths.iter().map(|d| cis(k * propagation_diff(pos, *d))),
    ))
}

/// `L × n` matrix whose column `i` is the field response at `positions[i]`.
pub fn field_response_matrix(positions: &[Position2D], paths: &[Direction], wavelength: f64) -> CMatrix {
    let k = wavenumber(wavelength);
    CMatrix::from_fn(paths.len(), positions.len(), |j, n| {
        cis(k * propagation_diff(positions[n], paths[j]))
    })
}

/// Line-of-sight array steering vector toward `dir`.
pub fn steering_vector(dir: Direction, positions: &[Position2D], wavelength: f64) -> CVector {
    let k = wavenumber(wavelength);
    CVector::from_iterator(
        positions.len(),
        positions.iter().map(|p| cis(k * propagation_diff(*p, dir))),
    )
}

/// `A = a_r(r̃) a_t(t̃)ᴴ` for one scatterer.
pub fn radar_response_matrix(
    dir: Direction,
    rx: &[Position2D],
    tx: &[Position2D],
    wavelength: f64,
) -> CMatrix {
    let ar = steering_vector(dir, rx, wavelength);
    let at = steering_vector(dir, tx, wavelength);
    crate::linalg::outer(&ar, &at)
}

/// `H = Fᴴ Σ G` (M × N).
pub fn assemble_bs_ris_channel(g: &CMatrix, f: &CMatrix, prm: &CVector) -> Result<CMatrix> {
    let l = prm.len();
    if g.nrows() != l || f.nrows() != l {
        return Err(DfrcError::Dimension(format!(
            "G is {}x{}, F is {}x{}, Σ has {} paths",
            g.nrows(),
            g.ncols(),
            f.nrows(),
            f.ncols(),
            l
        )));
    }
    let mut sg = g.clone();
    for (j, mut row) in sg.row_iter_mut().enumerate() {
        row *= prm[j];
    }
    Ok(f.adjoint() * sg)
}

/// RIS → user channel `h_k = F_kᴴ Σ_k 1_L` for a single fixed-antenna user.
pub fn user_channel(f: &CMatrix, prm: &CVector) -> CVector {
    f.adjoint() * prm
}

/// Near-square planar grid with the given spacing, centred on the origin, row-major.
pub fn planar_grid(count: usize, spacing: f64) -> Vec<Position2D> {
    let rows = (1..=count)
        .take_while(|r| r * r <= count)
        .filter(|r| count.is_multiple_of(*r))
        .last()
        .unwrap_or(1);
    let cols = count / rows.max(1);
    let mut out = Vec::with_capacity(count);
    for r in 0..rows {
        for c in 0..cols {
            out.push(Position2D::new(
                (c as f64 - (cols as f64 - 1.0) / 2.0) * spacing,
                (r as f64 - (rows as f64 - 1.0) / 2.0) * spacing,
            ));
        }
    }
    out
}

/// Draws `CN(0, variance)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> C64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(s * re, s * im)
}

/// Diagonal of a path-response matrix with i.i.d. `CN(0, gain / L)` entries.
pub fn draw_prm<R: Rng + ?Sized>(rng: &mut R, paths: usize, gain: f64) -> CVector {
    CVector::from_iterator(paths, (0..paths).map(|_| complex_gaussian(rng, gain / paths as f64)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadarGeometry {
    pub target: Direction,
    pub clutter: Vec<Direction>,
    /// ζ₀²
    pub target_power: f64,
    /// ζ_q²
    pub clutter_power: Vec<f64>,
    /// σ_r²
    pub noise: f64,
}

impl RadarGeometry {
    pub fn from_config(cfg: &ScenarioConfig) -> Self {
        Self {
            target: cfg.target,
            clutter: cfg.clutter.clone(),
            target_power: cfg.target_power(),
            clutter_power: vec![cfg.clutter_power; cfg.clutter.len()],
            noise: cfg.radar_noise,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BsRisLink {
    /// Path angles seen from the BS.
    pub bs_paths: Vec<Direction>,
    /// Path angles seen from the RIS.
    pub ris_paths: Vec<Direction>,
    pub prm: CVector,
    /// `F` at the fixed RIS element positions (L × M).
    pub ris_frm: CMatrix,
    /// `Fᴴ Σ` (M × L), so that `H(t̃) = cascade · G(t̃)`.
    pub cascade: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserLink {
    pub position: Position2D,
    pub ris_paths: Vec<Direction>,
    pub prm: CVector,
    /// `h_k`, length M.
    pub channel: CVector,
}

/// All channel quantities of one realization. Position-dependent matrices are built on
/// demand from the stored angles, so one state serves every antenna layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    pub wavelength: f64,
    pub ris_positions: Vec<Position2D>,
    pub bs_ris: BsRisLink,
    pub users: Vec<UserLink>,
    pub radar: RadarGeometry,
}

impl ChannelState {
    /// `G(t̃)`, L × N.
    pub fn tx_frm(&self, tx: &[Position2D]) -> CMatrix {
        field_response_matrix(tx, &self.bs_ris.bs_paths, self.wavelength)
    }

    /// `H(t̃)`, M × N.
    pub fn bs_ris_channel(&self, tx: &[Position2D]) -> CMatrix {
        &self.bs_ris.cascade * self.tx_frm(tx)
    }

    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn ris_count(&self) -> usize {
        self.ris_positions.len()
    }
}

/// Draws one channel realization. Identical RNG state gives a bit-identical result.
pub fn sample_channels<R: Rng + ?Sized>(rng: &mut R, cfg: &ScenarioConfig) -> ChannelState {
    let geo = &cfg.geometry;
    let l = cfg.paths;
    let wavelength = cfg.wavelength;
    let ris_positions = planar_grid(cfg.ris_elements, wavelength / 2.0);

    let bs_paths: Vec<Direction> = (0..l).map(|_| Direction::uniform(rng)).collect();
    let ris_paths: Vec<Direction> = (0..l).map(|_| Direction::uniform(rng)).collect();
    let d_bs_ris = geo.bs.distance(&geo.ris);
    let prm = draw_prm(rng, l, geo.path_gain(d_bs_ris, geo.exponent_bs_ris));
    let ris_frm = field_response_matrix(&ris_positions, &ris_paths, wavelength);
    let mut cascade = ris_frm.adjoint();
    for (j, mut col) in cascade.column_iter_mut().enumerate() {
        col *= prm[j];
    }

    let users = (0..cfg.users)
        .map(|_| {
            let radius = geo.user_radius * rng.gen::<f64>().sqrt();
            let angle = rng.gen_range(0.0..2.0 * PI);
            let position = Position2D::new(
                geo.user_center.x + radius * angle.cos(),
                geo.user_center.y + radius * angle.sin(),
            );
            let paths: Vec<Direction> = (0..l).map(|_| Direction::uniform(rng)).collect();
            let d = position.distance(&geo.ris).max(1e-3);
            let prm = draw_prm(rng, l, geo.path_gain(d, geo.exponent_ris_user));
            let f = field_response_matrix(&ris_positions, &paths, wavelength);
            UserLink {
                position,
                channel: user_channel(&f, &prm),
                ris_paths: paths,
                prm,
            }
        })
        .collect();

    ChannelState {
        wavelength,
        ris_positions,
        bs_ris: BsRisLink {
            bs_paths,
            ris_paths,
            prm,
            ris_frm,
            cascade,
        },
        users,
        radar: RadarGeometry::from_config(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fro2, re};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_positions(rng: &mut ChaCha8Rng, n: usize, half: f64) -> Vec<Position2D> {
        (0..n)
            .map(|_| Position2D::new(rng.gen_range(-half..half), rng.gen_range(-half..half)))
            .collect()
    }

    #[test]
    fn propagation_diff_examples() {
        let d = Direction::from_degrees(30.0, 45.0);
        assert_eq!(propagation_diff(Position2D::new(0.0, 0.0), d), 0.0);
        let broadside = Direction::new(PI / 2.0, 0.0);
        assert!((propagation_diff(Position2D::new(1.0, 0.0), broadside) - 1.0).abs() < 1e-15);
        // 0.05·sin30°·cos45° + 0.05·cos30°
        let expected = 0.05 * 0.5 * std::f64::consts::FRAC_1_SQRT_2 + 0.05 * 3f64.sqrt() / 2.0;
        let got = propagation_diff(Position2D::new(0.05, 0.05), d);
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.0609807).abs() < 5e-6);
    }

    #[test]
    fn propagation_diff_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let p = Position2D::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let d = Direction::uniform(&mut rng);
            let a = rng.gen_range(-5.0..5.0);
            let lhs = propagation_diff(p.scaled(a), d);
            assert!((lhs - a * propagation_diff(p, d)).abs() < 1e-12);
        }
    }

    #[test]
    fn frv_examples() {
        let paths: Vec<Direction> = (0..4).map(|i| Direction::new(0.3 * i as f64, 0.7)).collect();
        let v = field_response_vector(Position2D::default(), &paths, 0.1).unwrap();
        assert!(v.iter().all(|z| (*z - re(1.0)).norm() < 1e-15));

        let half = field_response_vector(
            Position2D::new(0.05, 0.0),
            &[Direction::new(PI / 2.0, 0.0)],
            0.1,
        )
        .unwrap();
        assert!((half[0] - re(-1.0)).norm() < 1e-12);

        assert!(field_response_vector(Position2D::default(), &paths, 0.0).is_err());
        assert!(field_response_vector(Position2D::default(), &paths, -1.0).is_err());
    }

    #[test]
    fn frv_matches_elementwise_recomputation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pos = Position2D::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
            let paths: Vec<Direction> = (0..5).map(|_| Direction::uniform(&mut rng)).collect();
            let v = field_response_vector(pos, &paths, 0.1).unwrap();
            for (j, d) in paths.iter().enumerate() {
                let phase = 2.0 * PI / 0.1
                    * (pos.x * d.elevation.sin() * d.azimuth.cos() + pos.y * d.elevation.cos());
                let oracle = C64::new(phase.cos(), phase.sin());
                assert!((v[j] - oracle).norm() < 1e-12);
                assert!((v[j].norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bs_ris_channel_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let tx = random_positions(&mut rng, 3, 0.1);
        let ris = planar_grid(6, 0.05);
        let paths: Vec<Direction> = (0..4).map(|_| Direction::uniform(&mut rng)).collect();
        let ris_paths: Vec<Direction> = (0..4).map(|_| Direction::uniform(&mut rng)).collect();
        let g = field_response_matrix(&tx, &paths, 0.1);
        let f = field_response_matrix(&ris, &ris_paths, 0.1);

        let zero = assemble_bs_ris_channel(&g, &f, &CVector::zeros(4)).unwrap();
        assert_eq!(fro2(&zero), 0.0);

        // triple-loop oracle
        let prm = draw_prm(&mut rng, 4, 1.0);
        let h = assemble_bs_ris_channel(&g, &f, &prm).unwrap();
        for m in 0..ris.len() {
            for n in 0..tx.len() {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..4 {
                    acc += f[(j, m)].conj() * prm[j] * g[(j, n)];
                }
                assert!((h[(m, n)] - acc).norm() < 1e-12);
            }
        }

        // single path, all at the origin: rank-one matrix of σ₁
        let origin = vec![Position2D::default(); 3];
        let g1 = field_response_matrix(&origin, &paths[..1], 0.1);
        let f1 = field_response_matrix(&[Position2D::default(); 5], &ris_paths[..1], 0.1);
        let s = CVector::from_vec(vec![C64::new(0.3, -0.4)]);
        let h1 = assemble_bs_ris_channel(&g1, &f1, &s).unwrap();
        assert!(h1.iter().all(|z| (*z - s[0]).norm() < 1e-15));

        assert!(assemble_bs_ris_channel(&g, &f, &CVector::zeros(3)).is_err());
    }

    #[test]
    fn user_channel_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ris = planar_grid(8, 0.05);
        let paths: Vec<Direction> = (0..3).map(|_| Direction::uniform(&mut rng)).collect();
        let f = field_response_matrix(&ris, &paths, 0.1);
        assert_eq!(user_channel(&f, &CVector::zeros(3)).norm(), 0.0);

        let prm = draw_prm(&mut rng, 3, 1.0);
        let h = user_channel(&f, &prm);
        for m in 0..ris.len() {
            let oracle: C64 = (0..3).map(|j| f[(j, m)].conj() * prm[j]).sum();
            assert!((h[m] - oracle).norm() < 1e-14);
        }

        let f1 = field_response_matrix(&ris, &paths[..1], 0.1);
        let s1 = CVector::from_vec(vec![prm[0]]);
        let h1 = user_channel(&f1, &s1);
        for m in 0..ris.len() {
            assert!((h1[m] - prm[0] * f1[(0, m)].conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn radar_response_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let origin = vec![Position2D::default(); 4];
        let d = Direction::from_degrees(30.0, 45.0);
        let a = radar_response_matrix(d, &origin, &origin, 0.1);
        assert!(a.iter().all(|z| (*z - re(1.0)).norm() < 1e-15));

        for _ in 0..20 {
            let rx = random_positions(&mut rng, 4, 0.1);
            let tx = random_positions(&mut rng, 4, 0.1);
            let d = Direction::uniform(&mut rng);
            let a = radar_response_matrix(d, &rx, &tx, 0.1);
            assert!((fro2(&a).sqrt() - 4.0).abs() < 1e-12);
            let sv = a.clone().svd(false, false).singular_values;
            assert!(sv[1] < 1e-10 * sv[0]);
            let k = 2.0 * PI / 0.1;
            for m in 0..4 {
                for n in 0..4 {
                    let ph = k * (propagation_diff(rx[m], d) - propagation_diff(tx[n], d));
                    assert!((a[(m, n)] - cis(ph)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn channel_is_continuous_in_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cfg = ScenarioConfig::desk();
        let ch = sample_channels(&mut rng, &cfg);
        let tx = random_positions(&mut rng, 4, 0.1);
        let h0 = ch.bs_ris_channel(&tx);
        let eps = 1e-6;
        let mut moved = tx.clone();
        moved[2].x += eps;
        let diff = fro2(&(ch.bs_ris_channel(&moved) - &h0)).sqrt();
        // |∂H/∂x| ≤ κ·‖column‖, so the change is O(ε)
        let bound = wavenumber(cfg.wavelength) * fro2(&h0).sqrt() * eps * 10.0;
        assert!(diff > 0.0 && diff < bound, "{diff} vs {bound}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let cfg = ScenarioConfig::desk();
        let a = sample_channels(&mut ChaCha8Rng::seed_from_u64(42), &cfg);
        let b = sample_channels(&mut ChaCha8Rng::seed_from_u64(42), &cfg);
        assert_eq!(a, b);
        let c = sample_channels(&mut ChaCha8Rng::seed_from_u64(43), &cfg);
        assert_ne!(a, c);
    }

    #[test]
    fn prm_second_moment_matches_path_gain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let geo = crate::config::ScenarioGeometry::default();
        let gain = geo.path_gain(5.0, 2.8);
        let draws = 100_000;
        let l = 4;
        let mean: f64 = (0..draws / l)
            .flat_map(|_| draw_prm(&mut rng, l, gain).iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
            .sum::<f64>()
            / draws as f64;
        let expected = gain / l as f64;
        assert!((mean / expected - 1.0).abs() < 0.02, "{mean} vs {expected}");

        // doubling the distance scales the average power by 2^-2.8
        let far = geo.path_gain(10.0, 2.8);
        assert!((far / gain - 2f64.powf(-2.8)).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mean_far: f64 = (0..draws / l)
            .flat_map(|_| draw_prm(&mut rng, l, far).iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())
            .sum::<f64>()
            / draws as f64;
        assert!((mean_far / mean / 2f64.powf(-2.8) - 1.0).abs() < 0.03);
    }

    #[test]
    fn sampled_angles_in_range_and_responses_unit_modulus() {
        let cfg = ScenarioConfig::paper();
        let ch = sample_channels(&mut ChaCha8Rng::seed_from_u64(7), &cfg);
        assert!(ch.bs_ris.bs_paths.iter().chain(&ch.bs_ris.ris_paths).all(Direction::in_range));
        assert!(ch.bs_ris.ris_frm.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        assert_eq!(ch.users.len(), 3);
        for u in &ch.users {
            assert!(u.position.distance(&cfg.geometry.user_center) <= 3.0 + 1e-12);
            assert_eq!(u.channel.len(), 32);
        }
    }

    #[test]
    fn planar_grid_shapes() {
        let g = planar_grid(4, 0.05);
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|p| (p.x.abs() - 0.025).abs() < 1e-15 && (p.y.abs() - 0.025).abs() < 1e-15));
        let g8 = planar_grid(8, 0.05);
        assert!((min_pairwise_distance(&g8) - 0.05).abs() < 1e-15);
        assert!(g8.iter().all(|p| p.x.abs() <= 0.1 && p.y.abs() <= 0.1));
        assert_eq!(planar_grid(1, 0.05), vec![Position2D::default()]);
    }
}
