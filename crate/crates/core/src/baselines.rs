//! Comparison schemes. Every baseline runs through the same BCD driver; they differ only in
//! which blocks are frozen and how the antenna positions are chosen.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::antenna::{ObjectiveFactors, PositionFunction, QosFactors, ReceiveSinr};
use crate::block::{BlockOutcome, BlockStatus};
use crate::config::ScenarioConfig;
use crate::error::{DfrcError, Result};
use crate::geometry::{min_pairwise_distance, planar_grid, ChannelState, Position2D};
use crate::linalg::{cis, CVector};
use crate::metrics::DesignVariables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeTag {
    /// Everything optimized, continuous antenna positions.
    Proposed,
    /// Fixed λ/2 planar arrays.
    Fpa,
    /// Randomly placed arrays, fixed after drawing.
    Rpa,
    /// Random RIS phases, never optimized.
    RandomRis,
    /// Greedy antenna selection on the λ/2 lattice.
    Gas,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 5] = [Self::Proposed, Self::Fpa, Self::Rpa, Self::RandomRis, Self::Gas];

    pub fn name(self) -> &'static str {
        match self {
            Self::Proposed => "proposed",
            Self::Fpa => "fpa",
            Self::Rpa => "rpa",
            Self::RandomRis => "random_ris",
            Self::Gas => "gas",
        }
    }

    pub fn optimizes_ris(self) -> bool {
        self != Self::RandomRis
    }

    /// Whether the continuous position blocks run.
    pub fn continuous_positions(self) -> bool {
        matches!(self, Self::Proposed | Self::RandomRis)
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeTag {
    type Err = DfrcError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| DfrcError::InvalidConfig(format!("unknown scheme '{s}'")))
    }
}

/// λ/2-spaced near-square grid centred in the region.
pub fn fpa_layout(n: usize, wavelength: f64, region_size: f64) -> Result<Vec<Position2D>> {
    let layout = planar_grid(n, wavelength / 2.0);
    let half = region_size / 2.0;
    if layout.iter().any(|p| p.x.abs() > half + 1e-12 || p.y.abs() > half + 1e-12) {
        return Err(DfrcError::InvalidConfig(format!(
            "{n}-element λ/2 grid does not fit a {region_size} m region"
        )));
    }
    Ok(layout)
}

const RPA_MAX_REJECTIONS: usize = 10_000;

/// Uniform positions in `[−half, half]²` with pairwise distance at least `min_distance`.
pub fn rpa_layout<R: Rng + ?Sized>(n: usize, half: f64, min_distance: f64, rng: &mut R) -> Result<Vec<Position2D>> {
    let mut out: Vec<Position2D> = Vec::with_capacity(n);
    let mut rejections = 0;
    while out.len() < n {
        let p = Position2D::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
        if out.iter().all(|q| q.distance(&p) >= min_distance) {
            out.push(p);
        } else {
            rejections += 1;
            if rejections >= RPA_MAX_REJECTIONS {
                return Err(DfrcError::Infeasible(format!(
                    "could not place {n} antennas {min_distance} m apart after {RPA_MAX_REJECTIONS} rejections"
                )));
            }
        }
    }
    Ok(out)
}

/// Unit-modulus coefficients with phases uniform on [0, 2π).
pub fn random_ris<R: Rng + ?Sized>(m: usize, rng: &mut R) -> CVector {
    CVector::from_fn(m, |_, _| cis(rng.gen_range(0.0..std::f64::consts::TAU)))
}

/// The λ/2 lattice covering the region, centred on the origin.
pub fn gas_sites(cfg: &ScenarioConfig) -> Vec<Position2D> {
    let step = cfg.wavelength / 2.0;
    let per_axis = (cfg.region_size / step + 1e-9).floor() as usize + 1;
    let offset = (per_axis as f64 - 1.0) / 2.0;
    let mut out = Vec::with_capacity(per_axis * per_axis);
    for r in 0..per_axis {
        for c in 0..per_axis {
            out.push(Position2D::new((c as f64 - offset) * step, (r as f64 - offset) * step));
        }
    }
    out
}

/// Starting layout for GAS: the sites closest to the centre, taken greedily under the
/// distance constraint.
pub fn gas_start(cfg: &ScenarioConfig) -> Result<Vec<Position2D>> {
    let mut sites = gas_sites(cfg);
    sites.sort_by(|a, b| {
        let (da, db) = (a.x.hypot(a.y), b.x.hypot(b.y));
        da.partial_cmp(&db).unwrap()
    });
    let mut out: Vec<Position2D> = Vec::new();
    for s in sites {
        if out.len() == cfg.antennas {
            break;
        }
        if out.iter().all(|q| q.distance(&s) >= cfg.min_distance - 1e-12) {
            out.push(s);
        }
    }
    if out.len() < cfg.antennas {
        return Err(DfrcError::Infeasible(format!(
            "lattice admits only {} of {} antennas",
            out.len(),
            cfg.antennas
        )));
    }
    Ok(out)
}

/// The objective restricted to the first `n` antennas.
fn truncated(f: &ObjectiveFactors, n: usize) -> ObjectiveFactors {
    ObjectiveFactors {
        b: f.b.rows(0, n).into_owned(),
        clutter_weights: f.clutter_weights.clone(),
        gram: f.gram.view((0, 0), (n, n)).into_owned(),
        target: f.target,
        clutter: f.clutter.clone(),
        wavelength: f.wavelength,
    }
}

/// Value of a partial layout for a surrogate objective: only its first `pos.len()` antennas
/// are placed.
pub fn prefix_value(f: &ObjectiveFactors) -> impl Fn(&[Position2D]) -> f64 + '_ {
    move |pos| truncated(f, pos.len()).value(pos)
}

/// Greedy forward selection: antenna n goes to the vacant, distance-feasible site that
/// maximizes `value` of antennas `0..=n`. The last antenna additionally has to satisfy
/// `complete_ok` on the full layout.
pub fn greedy_select(
    value: impl Fn(&[Position2D]) -> f64,
    sites: &[Position2D],
    count: usize,
    min_distance: f64,
    complete_ok: impl Fn(&[Position2D]) -> bool,
) -> Result<Vec<Position2D>> {
    let mut chosen: Vec<Position2D> = Vec::with_capacity(count);
    let mut used = vec![false; sites.len()];
    for n in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in sites.iter().enumerate() {
            if used[i] || chosen.iter().any(|q| q.distance(s) < min_distance - 1e-12) {
                continue;
            }
            chosen.push(*s);
            let ok = n + 1 < count || complete_ok(&chosen);
            let v = value(&chosen);
            chosen.pop();
            if ok && best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        let Some((i, _)) = best else {
            return Err(DfrcError::Infeasible(format!("no feasible lattice site for antenna {n}")));
        };
        used[i] = true;
        chosen.push(sites[i]);
    }
    Ok(chosen)
}

fn gas_block(
    start: &[Position2D],
    value: impl Fn(&[Position2D]) -> f64,
    qos: &[QosFactors],
    cfg: &ScenarioConfig,
) -> Result<BlockOutcome<Vec<Position2D>>> {
    let ok = |pos: &[Position2D]| qos.iter().all(|q| q.constraint_value(pos) <= 0.0);
    let picked = match greedy_select(&value, &gas_sites(cfg), cfg.antennas, cfg.min_distance, ok) {
        Ok(p) => p,
        Err(DfrcError::Infeasible(_)) => return Ok(BlockOutcome::kept(start.to_vec(), BlockStatus::Infeasible, 1)),
        Err(e) => return Err(e),
    };
    let better = value(&picked) > value(start);
    let valid = picked.len() < 2 || min_pairwise_distance(&picked) >= cfg.min_distance - 1e-9;
    if better && valid {
        Ok(BlockOutcome::kept(picked, BlockStatus::Updated, 1))
    } else {
        Ok(BlockOutcome::kept(start.to_vec(), BlockStatus::Kept, 1))
    }
}

/// Greedy re-selection of the transmit sites; kept only if the surrogate improves and every
/// SINR target still holds.
pub fn gas_tx_positions(vars: &DesignVariables, ch: &ChannelState, cfg: &ScenarioConfig) -> Result<BlockOutcome<Vec<Position2D>>> {
    let objective = ObjectiveFactors::transmit(ch, vars);
    let qos: Vec<QosFactors> = (0..ch.user_count())
        .map(|k| QosFactors::new(k, ch, vars, cfg.qos, cfg.user_noise))
        .collect();
    gas_block(&vars.tx, prefix_value(&objective), &qos, cfg)
}

pub fn gas_rx_positions(vars: &DesignVariables, ch: &ChannelState, cfg: &ScenarioConfig) -> Result<BlockOutcome<Vec<Position2D>>> {
    let sinr = ReceiveSinr::new(ch, vars);
    gas_block(&vars.rx, |pos: &[Position2D]| sinr.value(pos), &[], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Direction, steering_vector};
    use crate::linalg::{CMatrix, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scheme_names_round_trip() {
        for t in SchemeTag::ALL {
            assert_eq!(t.name().parse::<SchemeTag>().unwrap(), t);
        }
        assert!("mystery".parse::<SchemeTag>().is_err());
    }

    #[test]
    fn fpa_grids() {
        let four = fpa_layout(4, 0.1, 0.2).unwrap();
        for p in &four {
            assert!((p.x.abs() - 0.025).abs() < 1e-15 && (p.y.abs() - 0.025).abs() < 1e-15);
        }
        assert!((min_pairwise_distance(&four) - 0.05).abs() < 1e-15);
        let eight = fpa_layout(8, 0.1, 0.2).unwrap();
        assert!(eight.iter().all(|p| p.x.abs() <= 0.1 && p.y.abs() <= 0.1));
        assert!((min_pairwise_distance(&eight) - 0.05).abs() < 1e-15);
        assert!(fpa_layout(64, 0.1, 0.2).is_err());
    }

    #[test]
    fn rpa_layouts_respect_distance() {
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = rpa_layout(8, 0.1, 0.05, &mut rng).unwrap();
            assert!(min_pairwise_distance(&l) >= 0.05);
            assert!(l.iter().all(|p| p.x.abs() <= 0.1 && p.y.abs() <= 0.1));
        }
        let a = rpa_layout(4, 0.1, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = rpa_layout(4, 0.1, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(rpa_layout(1, 0.1, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).unwrap().len(), 1);
        assert!(rpa_layout(50, 0.1, 0.05, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }

    #[test]
    fn random_ris_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let v = random_ris(100_000, &mut rng);
        assert!(v.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
        let bins = 20;
        let mut counts = vec![0f64; bins];
        for z in v.iter() {
            let phase = z.arg().rem_euclid(std::f64::consts::TAU);
            counts[((phase / std::f64::consts::TAU) * bins as f64) as usize % bins] += 1.0;
        }
        let expected = 100_000.0 / bins as f64;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 19 degrees of freedom, 0.999 quantile ≈ 43.8
        assert!(chi2 < 43.8, "chi2 = {chi2}");
        assert_eq!(random_ris(5, &mut ChaCha8Rng::seed_from_u64(1)), random_ris(5, &mut ChaCha8Rng::seed_from_u64(1)));
    }

    #[test]
    fn lattice_and_start() {
        let cfg = ScenarioConfig::desk();
        let sites = gas_sites(&cfg);
        assert_eq!(sites.len(), 25);
        assert!((min_pairwise_distance(&sites) - 0.05).abs() < 1e-15);
        let start = gas_start(&cfg).unwrap();
        assert_eq!(start.len(), 4);
        assert_eq!(start[0], Position2D::new(0.0, 0.0));
        assert!(min_pairwise_distance(&start) >= cfg.min_distance - 1e-12);
        let too_many = ScenarioConfig { antennas: 26, ..cfg };
        assert!(gas_start(&too_many).is_err());
    }

    #[test]
    fn single_antenna_greedy_is_exhaustive() {
        let cfg = ScenarioConfig::desk();
        let sites = gas_sites(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = ObjectiveFactors {
                b: CVector::from_element(1, crate::geometry::complex_gaussian(&mut rng, 1.0)),
                clutter_weights: vec![rng.gen_range(0.0..1.0)],
                gram: CMatrix::from_element(1, 1, C64::new(1.0, 0.0)),
                target: Direction::from_degrees(30.0, 45.0),
                clutter: vec![Direction::from_degrees(120.0, 90.0)],
                wavelength: cfg.wavelength,
            };
            let got = greedy_select(prefix_value(&f), &sites, 1, cfg.min_distance, |_| true).unwrap();
            let brute = sites.iter().map(|s| f.value(&[*s])).fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(f.value(&got), brute);
            // sanity: the value is 2Re{b* a} − c
            let a = steering_vector(f.target, &got, f.wavelength);
            assert!((f.value(&got) - (2.0 * (f.b[0].conj() * a[0]).re - f.clutter_weights[0])).abs() < 1e-12);
        }
    }

    #[test]
    fn greedy_respects_distance_and_completion() {
        let cfg = ScenarioConfig {
            min_distance: 0.08,
            ..ScenarioConfig::desk()
        };
        let f = ObjectiveFactors {
            b: CVector::from_element(4, C64::new(1.0, 0.0)),
            clutter_weights: vec![],
            gram: CMatrix::identity(4, 4),
            target: Direction::from_degrees(30.0, 45.0),
            clutter: vec![],
            wavelength: cfg.wavelength,
        };
        let sites = gas_sites(&cfg);
        let got = greedy_select(prefix_value(&f), &sites, 4, cfg.min_distance, |_| true).unwrap();
        assert!(min_pairwise_distance(&got) >= 0.08 - 1e-12);
        let banned = Position2D::new(0.1, 0.1);
        let got = greedy_select(prefix_value(&f), &sites, 4, cfg.min_distance, |p| !p.contains(&banned)).unwrap();
        assert!(!got[3..].contains(&banned));
        assert!(greedy_select(prefix_value(&f), &sites, 4, cfg.min_distance, |_| false).is_err());
    }
}
