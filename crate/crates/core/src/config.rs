//! Physical scenario parameters, kept in linear SI units.
//!
//! Everything expressed in dB or dBm is converted exactly once, when a spec file is ingested
//! (see [`crate::experiments::spec`]). Nothing downstream of this module touches logarithmic units.

use crate::error::{DfrcError, Result};
use crate::geometry::{ChannelState, Direction, Position2D};
use crate::linalg::{db_to_linear, dbm_to_watts};

/// Node placement and large-scale fading constants.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    pub bs: Position2D,
    pub ris: Position2D,
    pub user_center: Position2D,
    pub user_radius: f64,
    /// Average channel power gain at 1 m (linear).
    pub reference_gain: f64,
    pub exponent_bs_ris: f64,
    pub exponent_ris_user: f64,
    pub exponent_bs_target: f64,
}

impl Default for ScenarioGeometry {
    fn default() -> Self {
        Self {
            bs: Position2D::new(0.0, 0.0),
            ris: Position2D::new(30.0, 5.0),
            user_center: Position2D::new(30.0, 0.0),
            user_radius: 3.0,
            reference_gain: db_to_linear(-30.0),
            exponent_bs_ris: 2.4,
            exponent_ris_user: 2.8,
            exponent_bs_target: 2.6,
        }
    }
}

impl ScenarioGeometry {
    /// Large-scale gain `C₀ d^{-α}`.
    pub fn path_gain(&self, distance: f64, exponent: f64) -> f64 {
        self.reference_gain * distance.powf(-exponent)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// K
    pub users: usize,
    /// N, for both the transmit and the receive array.
    pub antennas: usize,
    /// M
    pub ris_elements: usize,
    /// L, shared by every communication link.
    pub paths: usize,
    pub wavelength: f64,
    /// Side A of the square moving region `[-A/2, A/2]²`.
    pub region_size: f64,
    /// Minimum inter-antenna distance D.
    pub min_distance: f64,
    /// P_t in watts.
    pub power_budget: f64,
    /// σ_k² in watts, identical for every user.
    pub user_noise: f64,
    /// σ_r² in watts.
    pub radar_noise: f64,
    /// γ_k (linear), identical for every user.
    pub qos: f64,
    pub target: Direction,
    pub clutter: Vec<Direction>,
    /// Target reflectivity before the BS→target path loss is applied.
    pub target_rcs: f64,
    pub target_distance: f64,
    /// ζ_q², identical for every clutter patch.
    pub clutter_power: f64,
    pub geometry: ScenarioGeometry,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::paper()
    }
}

impl ScenarioConfig {
    /// Full-size setting: K = 3, N = 8, M = 32, Q = 2.
    pub fn paper() -> Self {
        let wavelength = 0.1;
        Self {
            users: 3,
            antennas: 8,
            ris_elements: 32,
            paths: 4,
            wavelength,
            region_size: 2.0 * wavelength,
            min_distance: 0.5 * wavelength,
            power_budget: dbm_to_watts(30.0),
            user_noise: dbm_to_watts(-80.0),
            radar_noise: dbm_to_watts(-80.0),
            qos: db_to_linear(10.0),
            target: Direction::from_degrees(30.0, 45.0),
            clutter: vec![
                Direction::from_degrees(120.0, 90.0),
                Direction::from_degrees(135.0, 60.0),
            ],
            target_rcs: 1.0,
            target_distance: 40.0,
            clutter_power: 1.0,
            geometry: ScenarioGeometry::default(),
        }
    }

    /// Reduced setting used for quick runs: K = 2, N = 4, M = 16, Q = 2.
    pub fn desk() -> Self {
        Self {
            users: 2,
            antennas: 4,
            ris_elements: 16,
            ..Self::paper()
        }
    }

    /// ζ₀², the target echo power including BS→target path loss.
    pub fn target_power(&self) -> f64 {
        self.target_rcs
            * self
                .geometry
                .path_gain(self.target_distance, self.geometry.exponent_bs_target)
    }

    pub fn half_region(&self) -> f64 {
        0.5 * self.region_size
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.users == 0 {
            problems.push("users must be at least 1".to_string());
        }
        if self.antennas == 0 {
            problems.push("antennas must be at least 1".to_string());
        }
        if self.ris_elements == 0 {
            problems.push("ris_elements must be at least 1".to_string());
        }
        if self.paths == 0 {
            problems.push("paths must be at least 1".to_string());
        }
        for (name, value) in [
            ("wavelength", self.wavelength),
            ("region_size", self.region_size),
            ("power_budget", self.power_budget),
            ("user_noise", self.user_noise),
            ("radar_noise", self.radar_noise),
            ("qos", self.qos),
            ("target_distance", self.target_distance),
        ] {
            if !(value.is_finite() && value > 0.0) {
                problems.push(format!("{name} must be positive and finite, got {value}"));
            }
        }
        if !(self.min_distance.is_finite() && self.min_distance >= 0.0) {
            problems.push(format!("min_distance must be non-negative, got {}", self.min_distance));
        }
        if self.min_distance > self.region_size {
            problems.push(format!(
                "min_distance {} exceeds region size {}",
                self.min_distance, self.region_size
            ));
        }
        if self.target_rcs < 0.0 || self.clutter_power < 0.0 {
            problems.push("echo powers must be non-negative".to_string());
        }
        for (i, d) in std::iter::once(&self.target).chain(&self.clutter).enumerate() {
            if !d.in_range() {
                problems.push(format!("direction #{i} outside [0, π]²: {d:?}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(DfrcError::InvalidConfig(problems.join("; ")))
        }
    }
}

/// A sampled realization together with the parameters it was drawn for.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub channels: ChannelState,
}
