//! Experiment specification files.
//!
//! The format is line based: `key = value`, `#` starts a comment, blank lines are ignored.
//! Keys are dotted paths (`scenario.power_dbm`, `solver.penalty.tau`). A value is a bare
//! word or number, or a bracketed list whose items may again be lists:
//!
//! ```text
//! name = fig3
//! scale = desk              # paper | desk: defaults for K, N, M and P_t
//! seeds = 0..20             # range, count (`20` is the same) or list `[1, 4, 9]`
//! schemes = [proposed, fpa]
//! sweep.axis = power        # none | power | qos | antennas
//! sweep.values = [29, 32, 35, 38, 41]
//! scenario.clutter_deg = [[120, 90], [135, 60]]
//! ```
//!
//! Every key is optional. Unknown keys, malformed values and out-of-range settings are all
//! reported together, each with its key. Logarithmic units (dB, dBm) exist only here; the
//! parsed spec holds linear values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::baselines::{fpa_layout, gas_start, SchemeTag};
use crate::bcd::BcdConfig;
use crate::config::ScenarioConfig;
use crate::error::{DfrcError, Result};
use crate::geometry::{Direction, Position2D};
use crate::linalg::{db_to_linear, dbm_to_watts, linear_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    /// K = 3, N = 8, M = 32, P_t = 30 dBm.
    Paper,
    /// K = 2, N = 4, M = 16, P_t = 39 dBm.
    Desk,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Scale::Paper => "paper",
            Scale::Desk => "desk",
        }
    }

    pub fn scenario(self) -> ScenarioConfig {
        match self {
            Scale::Paper => ScenarioConfig::paper(),
            Scale::Desk => ScenarioConfig {
                power_budget: dbm_to_watts(DESK_POWER_DBM),
                ..ScenarioConfig::desk()
            },
        }
    }
}

/// The reduced setting loses about 9 dB of array and RIS gain; its default power makes up
/// for that so that the QoS constraints are feasible on most channel draws.
pub const DESK_POWER_DBM: f64 = 39.0;

impl FromStr for Scale {
    type Err = DfrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Scale::Paper),
            "desk" => Ok(Scale::Desk),
            _ => Err(DfrcError::InvalidConfig(format!("unknown scale `{s}` (expected paper or desk)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    None,
    /// P_t in dBm.
    Power,
    /// γ in dB.
    Qos,
    /// N, for both arrays.
    Antennas,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::None => "none",
            SweepAxis::Power => "power",
            SweepAxis::Qos => "qos",
            SweepAxis::Antennas => "antennas",
        }
    }

    /// Column name of the swept quantity in the CSV files. Without a sweep the transmit power
    /// is reported.
    pub fn column(self) -> &'static str {
        match self {
            SweepAxis::None | SweepAxis::Power => "power_dbm",
            SweepAxis::Qos => "qos_db",
            SweepAxis::Antennas => "antennas",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = DfrcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SweepAxis::None),
            "power" => Ok(SweepAxis::Power),
            "qos" => Ok(SweepAxis::Qos),
            "antennas" => Ok(SweepAxis::Antennas),
            _ => Err(DfrcError::InvalidConfig(format!(
                "unknown sweep axis `{s}` (expected none, power, qos or antennas)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub axis: SweepAxis,
    /// In the axis unit (dBm, dB or a count). Ignored when the axis is `none`.
    pub values: Vec<f64>,
}

impl Sweep {
    /// Swept values in the axis unit; a single point holding the base value without a sweep.
    pub fn points(&self, base: &ScenarioConfig) -> Vec<f64> {
        match self.axis {
            SweepAxis::None => vec![round_sig(linear_to_db(base.power_budget) + 30.0, 12)],
            _ => self.values.clone(),
        }
    }

    /// Scenario at one sweep point.
    pub fn apply(&self, base: &ScenarioConfig, value: f64) -> ScenarioConfig {
        let mut cfg = base.clone();
        match self.axis {
            SweepAxis::None => {}
            SweepAxis::Power => cfg.power_budget = dbm_to_watts(value),
            SweepAxis::Qos => cfg.qos = db_to_linear(value),
            SweepAxis::Antennas => cfg.antennas = value as usize,
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub scale: Scale,
    pub scenario: ScenarioConfig,
    pub solver: BcdConfig,
    pub sweep: Sweep,
    pub schemes: Vec<SchemeTag>,
    pub seeds: Vec<u64>,
    pub output: PathBuf,
    /// Write `trace_<seed>.csv` files.
    pub traces: bool,
}

impl ExperimentSpec {
    pub fn defaults(scale: Scale) -> Self {
        Self {
            name: "experiment".into(),
            scale,
            scenario: scale.scenario(),
            solver: BcdConfig::default(),
            sweep: Sweep {
                axis: SweepAxis::None,
                values: vec![],
            },
            schemes: SchemeTag::ALL.to_vec(),
            seeds: (0..20).collect(),
            output: PathBuf::from("results"),
            traces: true,
        }
    }

    /// Parses and validates spec text. `overrides` are `(key, value)` pairs applied on top of
    /// the file, as from the command line.
    pub fn parse_with(text: &str, overrides: &[(&str, &str)]) -> Result<Self> {
        let mut problems = Vec::new();
        let mut entries: BTreeMap<String, (String, Value)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                problems.push(format!("line {}: expected `key = value`", i + 1));
                continue;
            };
            let key = key.trim().to_string();
            let place = format!("line {}: {key}", i + 1);
            match Value::parse(value) {
                Ok(v) => {
                    if entries.insert(key.clone(), (place.clone(), v)).is_some() {
                        problems.push(format!("{place}: duplicate key"));
                    }
                }
                Err(e) => problems.push(format!("{place}: {e}")),
            }
        }
        for (key, value) in overrides {
            match Value::parse(value) {
                Ok(v) => {
                    entries.insert(key.to_string(), (format!("override {key}"), v));
                }
                Err(e) => problems.push(format!("override {key}: {e}")),
            }
        }

        let fields = fields();
        for key in entries.keys() {
            if !fields.iter().any(|f| f.key == key) {
                problems.push(format!("{}: unknown key", entries[key].0));
            }
        }
        let scale = match entries.get("scale") {
            Some((place, v)) => match v.atom().and_then(|s| s.parse::<Scale>().map_err(|e| e.to_string())) {
                Ok(s) => s,
                Err(e) => {
                    problems.push(format!("{place}: {e}"));
                    Scale::Paper
                }
            },
            None => Scale::Paper,
        };
        let mut spec = Self::defaults(scale);
        for f in &fields {
            if let Some((place, v)) = entries.get(f.key) {
                if let Err(e) = (f.set)(&mut spec, v) {
                    problems.push(format!("{place}: {e}"));
                }
            }
        }
        if problems.is_empty() {
            problems = spec.problems();
        }
        if problems.is_empty() {
            Ok(spec)
        } else {
            Err(DfrcError::InvalidConfig(problems.join("\n")))
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &[])
    }

    pub fn validate(&self) -> Result<()> {
        let problems = self.problems();
        if problems.is_empty() {
            Ok(())
        } else {
            Err(DfrcError::InvalidConfig(problems.join("\n")))
        }
    }

    fn problems(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if let Err(e) = self.solver.validate() {
            problems.push(format!("solver: {e}"));
        }
        if self.seeds.is_empty() {
            problems.push("seeds: at least one seed is required".into());
        }
        if self.schemes.is_empty() {
            problems.push("schemes: at least one scheme is required".into());
        }
        for (i, s) in self.schemes.iter().enumerate() {
            if self.schemes[..i].contains(s) {
                problems.push(format!("schemes: `{s}` listed twice"));
            }
        }
        if self.sweep.axis != SweepAxis::None && self.sweep.values.is_empty() {
            problems.push("sweep.values: a sweep needs at least one value".into());
        }
        for v in &self.sweep.values {
            if !v.is_finite() {
                problems.push(format!("sweep.values: {v} is not finite"));
            }
            if self.sweep.axis == SweepAxis::Antennas && !(v.fract() == 0.0 && *v >= 1.0) {
                problems.push(format!("sweep.values: antenna count {v} is not a positive integer"));
            }
        }
        for value in self.sweep.points(&self.scenario) {
            let cfg = self.sweep.apply(&self.scenario, value);
            let at = match self.sweep.axis {
                SweepAxis::None => String::new(),
                axis => format!(" (at {} = {value})", axis.name()),
            };
            if let Err(e) = cfg.validate() {
                problems.push(format!("scenario{at}: {e}"));
                continue;
            }
            let grid = [SchemeTag::Proposed, SchemeTag::Fpa, SchemeTag::RandomRis];
            if self.schemes.iter().any(|s| grid.contains(s)) {
                if let Err(e) = fpa_layout(cfg.antennas, cfg.wavelength, cfg.region_size) {
                    problems.push(format!("scenario.antennas{at}: {e}"));
                }
            }
            if self.schemes.contains(&SchemeTag::Gas) {
                if let Err(e) = gas_start(&cfg) {
                    problems.push(format!("scenario.antennas{at}: {e}"));
                }
            }
        }
        problems
    }

    /// Canonical text holding every field; parsing it gives the same spec back.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in fields() {
            out.push_str(&format!("{} = {}\n", f.key, (f.get)(self)));
        }
        out
    }

    /// Hex SHA-256 of [`Self::to_text`].
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(self.to_text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Built-in experiments, by name.
pub const PRESETS: [(&str, &str); 3] = [
    ("fig2", "convergence of the proposed scheme for several array sizes"),
    ("fig3", "radar SINR versus transmit power, all schemes"),
    ("fig4", "radar SINR versus communication QoS target, all schemes"),
];

/// Spec text of a preset. Desk-scale sweeps are shifted to the powers where the reduced
/// setting is mostly feasible.
pub fn preset(name: &str, scale: Scale) -> Result<String> {
    let desk = scale == Scale::Desk;
    let body = match name {
        "fig2" => {
            let n = if desk { "[3, 4, 5]" } else { "[4, 6, 8]" };
            format!("schemes = [proposed]\nseeds = 0..10\nsweep.axis = antennas\nsweep.values = {n}\n")
        }
        "fig3" => {
            let p = if desk { "[29, 32, 35, 38, 41]" } else { "[20, 23, 26, 29, 32]" };
            format!("sweep.axis = power\nsweep.values = {p}\n")
        }
        "fig4" => "sweep.axis = qos\nsweep.values = [6, 8, 10, 12, 14, 16]\n".to_string(),
        _ => {
            let known: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
            return Err(DfrcError::InvalidConfig(format!(
                "unknown preset `{name}` (available: {})",
                known.join(", ")
            )));
        }
    };
    let description = PRESETS.iter().find(|p| p.0 == name).map_or("", |p| p.1);
    Ok(format!(
        "# {description}\nname = {name}\nscale = {}\noutput = results/{name}\n{body}",
        scale.name()
    ))
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Atom(String),
    List(Vec<Value>),
}

impl Value {
    fn parse(text: &str) -> std::result::Result<Value, String> {
        let chars: Vec<char> = text.trim().chars().collect();
        if chars.is_empty() {
            return Err("missing value".into());
        }
        let mut at = 0;
        let v = Self::parse_at(&chars, &mut at)?;
        if chars[at..].iter().any(|c| !c.is_whitespace()) {
            return Err(format!("unexpected text after value: `{}`", chars[at..].iter().collect::<String>()));
        }
        Ok(v)
    }

    fn parse_at(chars: &[char], at: &mut usize) -> std::result::Result<Value, String> {
        while *at < chars.len() && chars[*at].is_whitespace() {
            *at += 1;
        }
        if chars.get(*at) != Some(&'[') {
            let start = *at;
            while *at < chars.len() && !matches!(chars[*at], ',' | ']' | '[') {
                *at += 1;
            }
            let atom: String = chars[start..*at].iter().collect::<String>().trim().to_string();
            if atom.is_empty() {
                return Err("empty list item".into());
            }
            return Ok(Value::Atom(atom.trim_matches('"').to_string()));
        }
        *at += 1;
        let mut items = Vec::new();
        loop {
            while *at < chars.len() && chars[*at].is_whitespace() {
                *at += 1;
            }
            match chars.get(*at) {
                None => return Err("unclosed `[`".into()),
                Some(']') => {
                    *at += 1;
                    return Ok(Value::List(items));
                }
                _ => {}
            }
            items.push(Self::parse_at(chars, at)?);
            while *at < chars.len() && chars[*at].is_whitespace() {
                *at += 1;
            }
            match chars.get(*at) {
                Some(',') => *at += 1,
                Some(']') => {}
                None => return Err("unclosed `[`".into()),
                _ => return Err("expected `,` or `]` in list".into()),
            }
        }
    }

    fn atom(&self) -> std::result::Result<&str, String> {
        match self {
            Value::Atom(s) => Ok(s),
            Value::List(_) => Err("expected a single value, got a list".into()),
        }
    }

    fn list(&self) -> std::result::Result<&[Value], String> {
        match self {
            Value::List(items) => Ok(items),
            Value::Atom(s) => Err(format!("expected a list, got `{s}`")),
        }
    }

    fn number(&self) -> std::result::Result<f64, String> {
        let s = self.atom()?;
        s.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("expected a number, got `{s}`"))
    }

    fn count(&self) -> std::result::Result<usize, String> {
        let s = self.atom()?;
        s.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got `{s}`"))
    }

    fn numbers(&self) -> std::result::Result<Vec<f64>, String> {
        self.list()?.iter().map(Value::number).collect()
    }

    fn pair(&self) -> std::result::Result<(f64, f64), String> {
        match self.numbers()?[..] {
            [a, b] => Ok((a, b)),
            _ => Err("expected a pair `[a, b]`".into()),
        }
    }

    fn num(x: f64) -> Value {
        Value::Atom(format!("{}", round_sig(x, 12)))
    }

    fn pair_of(a: f64, b: f64) -> Value {
        Value::List(vec![Value::num(a), Value::num(b)])
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(s) => write!(f, "{s}"),
            Value::List(items) => {
                write!(f, "[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Rounds to `digits` significant digits, so that unit conversions print cleanly.
fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

type Setter = fn(&mut ExperimentSpec, &Value) -> std::result::Result<(), String>;

struct Field {
    key: &'static str,
    get: fn(&ExperimentSpec) -> Value,
    set: Setter,
}

fn positive(x: f64) -> std::result::Result<f64, String> {
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {x}"))
    }
}

fn direction(v: &Value) -> std::result::Result<Direction, String> {
    let (e, a) = v.pair()?;
    Ok(Direction::from_degrees(e, a))
}

fn degrees(d: &Direction) -> Value {
    Value::pair_of(d.elevation.to_degrees(), d.azimuth.to_degrees())
}

fn point(v: &Value) -> std::result::Result<Position2D, String> {
    let (x, y) = v.pair()?;
    Ok(Position2D::new(x, y))
}

fn dbm(w: f64) -> Value {
    Value::num(linear_to_db(w) + 30.0)
}

fn db(x: f64) -> Value {
    Value::num(linear_to_db(x))
}

macro_rules! field {
    ($key:literal, |$s:ident| $get:expr, |$t:ident, $v:ident| $set:expr) => {
        Field {
            key: $key,
            get: |$s| $get,
            set: |$t, $v| {
                $set;
                Ok(())
            },
        }
    };
}

fn fields() -> Vec<Field> {
    vec![
        field!("name", |s| Value::Atom(s.name.clone()), |t, v| t.name = v.atom()?.to_string()),
        field!("scale", |s| Value::Atom(s.scale.name().into()), |t, v| t.scale = v
            .atom()?
            .parse()
            .map_err(|e: DfrcError| e.to_string())?),
        field!("output", |s| Value::Atom(s.output.display().to_string()), |t, v| t.output =
            PathBuf::from(v.atom()?)),
        field!("traces", |s| Value::Atom(s.traces.to_string()), |t, v| t.traces = v
            .atom()?
            .parse()
            .map_err(|_| "expected true or false".to_string())?),
        Field {
            key: "seeds",
            get: |s| {
                let contiguous = s.seeds.windows(2).all(|w| w[1] == w[0] + 1);
                match (contiguous, s.seeds.first(), s.seeds.last()) {
                    (true, Some(a), Some(b)) if s.seeds.len() > 1 => Value::Atom(format!("{a}..{}", b + 1)),
                    _ => Value::List(s.seeds.iter().map(|x| Value::Atom(x.to_string())).collect()),
                }
            },
            set: |t, v| {
                t.seeds = match v {
                    Value::List(items) => items
                        .iter()
                        .map(|i| i.atom().and_then(|s| s.parse::<u64>().map_err(|_| format!("bad seed `{s}`"))))
                        .collect::<std::result::Result<_, _>>()?,
                    Value::Atom(s) => match s.split_once("..") {
                        Some((a, b)) => {
                            let a: u64 = a.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
                            let b: u64 = b.trim().parse().map_err(|_| format!("bad range `{s}`"))?;
                            (a..b).collect()
                        }
                        None => (0..s.parse::<u64>().map_err(|_| format!("bad seed count `{s}`"))?).collect(),
                    },
                };
                Ok(())
            },
        },
        field!("schemes", |s| Value::List(s.schemes.iter().map(|x| Value::Atom(x.name().into())).collect()), |t, v| {
            let items = match v {
                Value::Atom(_) => std::slice::from_ref(v),
                Value::List(items) => items,
            };
            t.schemes = items
                .iter()
                .map(|i| i.atom().and_then(|s| s.parse::<SchemeTag>().map_err(|e| e.to_string())))
                .collect::<std::result::Result<_, _>>()?
        }),
        field!("sweep.axis", |s| Value::Atom(s.sweep.axis.name().into()), |t, v| t.sweep.axis = v
            .atom()?
            .parse()
            .map_err(|e: DfrcError| e.to_string())?),
        field!("sweep.values", |s| Value::List(s.sweep.values.iter().map(|x| Value::num(*x)).collect()), |t, v| t
            .sweep
            .values = v.numbers()?),
        field!("scenario.users", |s| Value::Atom(s.scenario.users.to_string()), |t, v| t.scenario.users = v.count()?),
        field!("scenario.antennas", |s| Value::Atom(s.scenario.antennas.to_string()), |t, v| t.scenario.antennas =
            v.count()?),
        field!("scenario.ris_elements", |s| Value::Atom(s.scenario.ris_elements.to_string()), |t, v| t
            .scenario
            .ris_elements = v.count()?),
        field!("scenario.paths", |s| Value::Atom(s.scenario.paths.to_string()), |t, v| t.scenario.paths = v.count()?),
        field!("scenario.wavelength_m", |s| Value::num(s.scenario.wavelength), |t, v| {
            // region and spacing are specified in wavelengths and follow λ
            let c = &mut t.scenario;
            let lambda = positive(v.number()?)?;
            c.region_size *= lambda / c.wavelength;
            c.min_distance *= lambda / c.wavelength;
            c.wavelength = lambda;
        }),
        field!("scenario.region_wavelengths", |s| Value::num(s.scenario.region_size / s.scenario.wavelength), |t, v| t
            .scenario
            .region_size = v.number()? * t.scenario.wavelength),
        field!(
            "scenario.min_distance_wavelengths",
            |s| Value::num(s.scenario.min_distance / s.scenario.wavelength),
            |t, v| t.scenario.min_distance = v.number()? * t.scenario.wavelength
        ),
        field!("scenario.power_dbm", |s| dbm(s.scenario.power_budget), |t, v| t.scenario.power_budget =
            dbm_to_watts(v.number()?)),
        field!("scenario.user_noise_dbm", |s| dbm(s.scenario.user_noise), |t, v| t.scenario.user_noise =
            dbm_to_watts(v.number()?)),
        field!("scenario.radar_noise_dbm", |s| dbm(s.scenario.radar_noise), |t, v| t.scenario.radar_noise =
            dbm_to_watts(v.number()?)),
        field!("scenario.qos_db", |s| db(s.scenario.qos), |t, v| t.scenario.qos = db_to_linear(v.number()?)),
        field!("scenario.target_deg", |s| degrees(&s.scenario.target), |t, v| t.scenario.target = direction(v)?),
        field!("scenario.clutter_deg", |s| Value::List(s.scenario.clutter.iter().map(degrees).collect()), |t, v| t
            .scenario
            .clutter = v.list()?.iter().map(direction).collect::<std::result::Result<_, _>>()?),
        field!("scenario.target_rcs", |s| Value::num(s.scenario.target_rcs), |t, v| t.scenario.target_rcs =
            v.number()?),
        field!("scenario.target_distance_m", |s| Value::num(s.scenario.target_distance), |t, v| t
            .scenario
            .target_distance = v.number()?),
        field!("scenario.clutter_power_db", |s| db(s.scenario.clutter_power), |t, v| t.scenario.clutter_power =
            db_to_linear(v.number()?)),
        field!("geometry.bs_m", |s| Value::pair_of(s.scenario.geometry.bs.x, s.scenario.geometry.bs.y), |t, v| t
            .scenario
            .geometry
            .bs = point(v)?),
        field!("geometry.ris_m", |s| Value::pair_of(s.scenario.geometry.ris.x, s.scenario.geometry.ris.y), |t, v| t
            .scenario
            .geometry
            .ris = point(v)?),
        field!(
            "geometry.user_center_m",
            |s| Value::pair_of(s.scenario.geometry.user_center.x, s.scenario.geometry.user_center.y),
            |t, v| t.scenario.geometry.user_center = point(v)?
        ),
        field!("geometry.user_radius_m", |s| Value::num(s.scenario.geometry.user_radius), |t, v| t
            .scenario
            .geometry
            .user_radius = v.number()?),
        field!("geometry.reference_gain_db", |s| db(s.scenario.geometry.reference_gain), |t, v| t
            .scenario
            .geometry
            .reference_gain = db_to_linear(v.number()?)),
        field!("geometry.exponent_bs_ris", |s| Value::num(s.scenario.geometry.exponent_bs_ris), |t, v| t
            .scenario
            .geometry
            .exponent_bs_ris = v.number()?),
        field!("geometry.exponent_ris_user", |s| Value::num(s.scenario.geometry.exponent_ris_user), |t, v| t
            .scenario
            .geometry
            .exponent_ris_user = v.number()?),
        field!("geometry.exponent_bs_target", |s| Value::num(s.scenario.geometry.exponent_bs_target), |t, v| t
            .scenario
            .geometry
            .exponent_bs_target = v.number()?),
        field!("solver.outer_tol", |s| Value::num(s.solver.outer_tol), |t, v| t.solver.outer_tol = v.number()?),
        field!("solver.max_outer", |s| Value::Atom(s.solver.max_outer.to_string()), |t, v| t.solver.max_outer =
            v.count()?),
        field!("solver.init_ris_rounds", |s| Value::Atom(s.solver.init_ris_rounds.to_string()), |t, v| t
            .solver
            .init_ris_rounds = v.count()?),
        field!("solver.beamforming.max_inner", |s| Value::Atom(s.solver.beamforming.max_inner.to_string()), |t, v| t
            .solver
            .beamforming
            .max_inner = v.count()?),
        field!("solver.beamforming.inner_tol", |s| Value::num(s.solver.beamforming.inner_tol), |t, v| t
            .solver
            .beamforming
            .inner_tol = v.number()?),
        field!("solver.penalty.rho_init_fraction", |s| Value::num(s.solver.penalty.rho_init_fraction), |t, v| t
            .solver
            .penalty
            .rho_init_fraction = v.number()?),
        field!("solver.penalty.tau", |s| Value::num(s.solver.penalty.tau), |t, v| t.solver.penalty.tau = v.number()?),
        field!("solver.penalty.xi1", |s| Value::num(s.solver.penalty.xi1), |t, v| t.solver.penalty.xi1 = v.number()?),
        field!("solver.penalty.xi2", |s| Value::num(s.solver.penalty.xi2), |t, v| t.solver.penalty.xi2 = v.number()?),
        field!("solver.penalty.max_outer", |s| Value::Atom(s.solver.penalty.max_outer.to_string()), |t, v| t
            .solver
            .penalty
            .max_outer = v.count()?),
        field!("solver.penalty.max_inner", |s| Value::Atom(s.solver.penalty.max_inner.to_string()), |t, v| t
            .solver
            .penalty
            .max_inner = v.count()?),
        field!("solver.positions.max_inner", |s| Value::Atom(s.solver.positions.max_inner.to_string()), |t, v| t
            .solver
            .positions
            .max_inner = v.count()?),
        field!("solver.positions.tol_wavelengths", |s| Value::num(s.solver.positions.tol), |t, v| t
            .solver
            .positions
            .tol = v.number()?),
        field!("solver.positions.max_doublings", |s| Value::Atom(s.solver.positions.max_doublings.to_string()), |t, v| t
            .solver
            .positions
            .max_doublings = v.count()?),
    ]
}
