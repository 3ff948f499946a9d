//! Experiment configuration files.
//!
//! A config is TOML restricted to flat dotted keys:
//!
//! ```text
//! network.kind = "ring"
//! network.n = 60
//! coupling.epsilon = 0.01
//! schedule.mode = "additive"
//! ```
//!
//! `[section]` headers are accepted too; either way every leaf is addressed
//! by its dotted path and checked against [`KEYS`]. Unknown keys are errors.
//! [`resolve`] applies defaults, draws every random quantity from the seed
//! and validates the result; [`Resolved::to_cfg`] writes it back out in a
//! form that parses to the same experiment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use slpin_core::control::{default_pinned_set, draw_uniform, ScheduleError};
use slpin_core::dynamics::{draw_deviations, ParamError, DEFAULT_HETEROGENEITY_THRESHOLD};
use slpin_core::network::{ring_lattice, NetworkError};
use slpin_core::rng::RNG_ALGORITHM;
use slpin_core::sim::draw_initial_phases;
use slpin_core::{
    CouplingMatrix, Experiment, IntegratorConfig, MagnitudeOrigin, Model, Network, PinningMode, PinningSchedule,
    SlParams,
};
use thiserror::Error;
use toml::Value;

use crate::edgelist;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Str,
    Int,
    Float,
    IntList,
    FloatList,
    Matrix,
    Edges,
    Seed,
}

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("network.kind", "\"ring\" or \"edgelist\" (default ring)"),
    ("network.n", "node count; required for rings"),
    ("network.k", "even ring coordination number (default 4)"),
    ("network.path", "edge-list file, relative to the config file"),
    ("network.edges", "inline edge list [[i, j, w], ...]"),
    ("oscillator.alpha", "growth rate α (default 1)"),
    ("oscillator.omega", "natural frequency ω (default 1)"),
    ("oscillator.delta_omega", "half-width of drawn frequency deviations"),
    ("oscillator.delta_alpha", "half-width of drawn growth-rate deviations"),
    ("oscillator.omega_deviations", "explicit per-node δω"),
    ("oscillator.alpha_deviations", "explicit per-node δα"),
    (
        "oscillator.heterogeneity_threshold",
        "largest |δ| as a fraction of the base value (default 0.1)",
    ),
    ("coupling.epsilon", "coupling strength ε; required"),
    ("coupling.d_unit", "2x2 coupling direction (default [[1, -1], [1, 1]])"),
    (
        "schedule.mode",
        "\"none\", \"additive\" or \"parametric\" (default none)",
    ),
    ("schedule.n_pinned", "pin nodes 0..n_pinned-1"),
    ("schedule.nodes", "explicit pinned node list"),
    ("schedule.t_p", "control window length"),
    ("schedule.scale", "additive λ drawn from Uniform(0, scale)"),
    ("schedule.low", "lower bound of drawn magnitudes"),
    ("schedule.high", "upper bound of drawn magnitudes"),
    (
        "schedule.magnitudes",
        "explicit λ (additive) or ω_p (parametric) per pinned node",
    ),
    (
        "schedule.origin",
        "\"drawn\", \"explicit\" or \"equivalent\"; provenance of the magnitudes",
    ),
    ("integrator.dt", "RK4 step (default 0.01)"),
    ("integrator.horizon", "total time (default 50)"),
    ("integrator.record_every", "steps between samples (default 1)"),
    ("model", "\"full\" or \"phase\" (default full)"),
    ("seed", "experiment seed (default 1)"),
    ("rng.algorithm", "must be \"chacha20\""),
    ("output.dir", "output directory, relative to the config file"),
    ("initial.phases", "explicit initial phases"),
];

fn kind_of(key: &str) -> Option<Kind> {
    Some(match key {
        "network.kind" | "network.path" | "schedule.mode" | "schedule.origin" | "model" | "rng.algorithm"
        | "output.dir" => Kind::Str,
        "network.n" | "network.k" | "schedule.n_pinned" | "integrator.record_every" => Kind::Int,
        "schedule.nodes" => Kind::IntList,
        "oscillator.omega_deviations" | "oscillator.alpha_deviations" | "schedule.magnitudes" | "initial.phases" => {
            Kind::FloatList
        }
        "coupling.d_unit" => Kind::Matrix,
        "network.edges" => Kind::Edges,
        "seed" => Kind::Seed,
        k if KEYS.iter().any(|(name, _)| *name == k) => Kind::Float,
        _ => return None,
    })
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown key `{key}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownKey { key: String, suggestion: Option<String> },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("`{key}`: expected {expected}")]
    Type { key: String, expected: &'static str },
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        message: message.into(),
    }
}

/// Nearest known key by edit distance, comparing both the full dotted key
/// and its last segment.
pub fn suggest_key(unknown: &str) -> Option<String> {
    let leaf = unknown.rsplit('.').next().unwrap_or(unknown);
    KEYS.iter()
        .map(|(key, _)| {
            let known_leaf = key.rsplit('.').next().unwrap_or(key);
            let d = strsim::levenshtein(unknown, key).min(strsim::levenshtein(leaf, known_leaf));
            (d, *key)
        })
        .min()
        .filter(|&(d, key)| d <= 2.max(key.rsplit('.').next().unwrap_or(key).len() / 3))
        .map(|(_, key)| key.to_string())
}

/// A syntactically valid config: known keys with well-typed values, nothing
/// resolved yet.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawConfig {
    values: BTreeMap<String, Value>,
    base_dir: PathBuf,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn check_type(key: &str, kind: Kind, v: &Value) -> Result<(), ConfigError> {
    let is_num = |v: &Value| matches!(v, Value::Float(_) | Value::Integer(_));
    let is_list = |v: &Value, f: &dyn Fn(&Value) -> bool| matches!(v, Value::Array(a) if a.iter().all(f));
    let (ok, expected) = match kind {
        Kind::Str => (v.is_str(), "a string"),
        Kind::Int => (matches!(v, Value::Integer(i) if *i >= 0), "a nonnegative integer"),
        Kind::Float => (is_num(v), "a number"),
        Kind::IntList => (
            is_list(v, &|x| matches!(x, Value::Integer(i) if *i >= 0)),
            "a list of nonnegative integers",
        ),
        Kind::FloatList => (is_list(v, &is_num), "a list of numbers"),
        Kind::Matrix => (
            matches!(v, Value::Array(rows) if rows.len() == 2 && rows.iter().all(|r| matches!(r, Value::Array(c) if c.len() == 2 && c.iter().all(is_num)))),
            "a 2x2 matrix [[a, b], [c, d]]",
        ),
        Kind::Edges => (
            is_list(v, &|e| {
                matches!(e, Value::Array(t) if (t.len() == 2 || t.len() == 3)
                    && matches!(t[0], Value::Integer(i) if i >= 0)
                    && matches!(t[1], Value::Integer(j) if j >= 0)
                    && t.get(2).is_none_or(is_num))
            }),
            "a list of [i, j] or [i, j, weight] edges",
        ),
        Kind::Seed => (
            matches!(v, Value::Integer(i) if *i >= 0) || matches!(v, Value::String(s) if s.parse::<u64>().is_ok()),
            "a nonnegative integer",
        ),
    };
    if ok {
        Ok(())
    } else {
        Err(ConfigError::Type {
            key: key.into(),
            expected,
        })
    }
}

/// Parses config text. Relative paths inside it resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<RawConfig, ConfigError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
    let mut values = BTreeMap::new();
    flatten("", &table, &mut values);
    let mut raw = RawConfig {
        values: BTreeMap::new(),
        base_dir: base_dir.to_path_buf(),
    };
    for (key, value) in values {
        raw.set(&key, value)?;
    }
    Ok(raw)
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<RawConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path.parent().unwrap_or(Path::new(".")))
}

impl RawConfig {
    /// Sets one key, with the same checks as parsing.
    pub fn set(&mut self, key: &str, value: Value) -> Result<(), ConfigError> {
        let Some(kind) = kind_of(key) else {
            return Err(ConfigError::UnknownKey {
                key: key.into(),
                suggestion: suggest_key(key),
            });
        };
        check_type(key, kind, &value)?;
        self.values.insert(key.into(), value);
        Ok(())
    }

    /// Sets a key from command-line text such as `0.05` or `[1, 2]`.
    pub fn set_from_str(&mut self, key: &str, text: &str) -> Result<(), ConfigError> {
        let table: toml::Table = format!("v = {text}")
            .parse()
            .or_else(|_| format!("v = {}", Value::String(text.into())).parse())
            .map_err(|e: toml::de::Error| ConfigError::Syntax(e.to_string()))?;
        self.set(key, table["v"].clone())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn base_dir(&self) -> &Path {
        &self.base_dir
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(Value::as_str)
    }

    fn f64(&self, key: &str) -> Option<f64> {
        self.values.get(key).map(as_f64)
    }

    fn usize(&self, key: &str) -> Option<usize> {
        self.values.get(key).and_then(Value::as_integer).map(|i| i as usize)
    }

    fn f64_list(&self, key: &str) -> Option<Vec<f64>> {
        self.values
            .get(key)
            .and_then(Value::as_array)
            .map(|a| a.iter().map(as_f64).collect())
    }

    fn usize_list(&self, key: &str) -> Option<Vec<usize>> {
        self.values
            .get(key)
            .and_then(Value::as_array)
            .map(|a| a.iter().filter_map(Value::as_integer).map(|i| i as usize).collect())
    }

    fn seed(&self) -> Option<u64> {
        match self.values.get("seed")? {
            Value::Integer(i) => Some(*i as u64),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        _ => f64::NAN,
    }
}

/// How the network was specified.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkSource {
    Ring { n: usize, k: usize },
    Edges { n: usize, edges: Vec<(usize, usize, f64)> },
}

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub model: Option<Model>,
}

/// A fully resolved experiment plus what is needed to write it back out.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub experiment: Experiment,
    pub source: NetworkSource,
    pub omega_deviations: Vec<f64>,
    pub alpha_deviations: Vec<f64>,
    pub heterogeneity_threshold: f64,
    pub output_dir: Option<PathBuf>,
}

pub fn parse_model(key: &str, text: &str) -> Result<Model, ConfigError> {
    match text {
        "full" => Ok(Model::Full),
        "phase" => Ok(Model::Phase),
        other => Err(invalid(key, format!("expected \"full\" or \"phase\", got \"{other}\""))),
    }
}

fn network_error(key: &str, e: NetworkError) -> ConfigError {
    let message = match e {
        NetworkError::OddCoordination(k) => {
            format!("ring lattice needs an even coordination number k (k/2 neighbors per side), got {k}")
        }
        other => other.to_string(),
    };
    invalid(key, message)
}

fn schedule_error(e: ScheduleError, explicit_nodes: bool) -> ConfigError {
    let key = match e {
        ScheduleError::PinnedCount { .. } if explicit_nodes => "schedule.nodes",
        ScheduleError::PinnedCount { .. } => "schedule.n_pinned",
        ScheduleError::NodeOutOfRange { .. } | ScheduleError::DuplicateNode(_) => "schedule.nodes",
        ScheduleError::InvalidDuration(_) | ScheduleError::DurationExceedsHorizon { .. } => "schedule.t_p",
        ScheduleError::MagnitudeCount { .. } | ScheduleError::NonFiniteMagnitude { .. } => "schedule.magnitudes",
        ScheduleError::InvalidInterval { .. } => "schedule.scale",
    };
    invalid(key, e.to_string())
}

fn param_error(e: ParamError) -> ConfigError {
    let key = match &e {
        ParamError::NonPositiveAlpha(_) => "oscillator.alpha",
        ParamError::NonFiniteOmega(_) => "oscillator.omega",
        ParamError::InvalidEpsilon(_) => "coupling.epsilon",
        ParamError::NonFiniteCouplingMatrix => "coupling.d_unit",
        ParamError::DeviationLength { name, .. } | ParamError::DeviationTooLarge { name, .. } => {
            if *name == "alpha" {
                "oscillator.alpha_deviations"
            } else {
                "oscillator.omega_deviations"
            }
        }
    };
    invalid(key, e.to_string())
}

fn resolve_network(raw: &RawConfig) -> Result<(Network, NetworkSource), ConfigError> {
    let kind = raw.str("network.kind").unwrap_or("ring");
    match kind {
        "ring" => {
            for key in ["network.path", "network.edges"] {
                if raw.has(key) {
                    return Err(invalid(key, "only used with network.kind = \"edgelist\""));
                }
            }
            let n = raw.usize("network.n").ok_or(ConfigError::Missing("network.n"))?;
            let k = raw.usize("network.k").unwrap_or(4);
            let key = if !k.is_multiple_of(2) || k >= n {
                "network.k"
            } else {
                "network.n"
            };
            let net = ring_lattice(n, k).map_err(|e| network_error(key, e))?;
            Ok((net, NetworkSource::Ring { n, k }))
        }
        "edgelist" => {
            if raw.has("network.k") {
                return Err(invalid("network.k", "only used with network.kind = \"ring\""));
            }
            let (edges, key) = match (raw.get("network.path"), raw.get("network.edges")) {
                (Some(_), Some(_)) => {
                    return Err(invalid(
                        "network.edges",
                        "give either network.path or network.edges, not both",
                    ))
                }
                (Some(p), None) => {
                    let path = raw.base_dir.join(p.as_str().unwrap_or_default());
                    let edges = edgelist::load(&path).map_err(|e| invalid("network.path", e.to_string()))?;
                    (edges, "network.path")
                }
                (None, Some(Value::Array(list))) => {
                    let edges = list
                        .iter()
                        .filter_map(Value::as_array)
                        .map(|t| {
                            let idx = |v: &Value| v.as_integer().unwrap_or(0) as usize;
                            (idx(&t[0]), idx(&t[1]), t.get(2).map_or(1.0, as_f64))
                        })
                        .collect();
                    (edges, "network.edges")
                }
                _ => return Err(ConfigError::Missing("network.path")),
            };
            let implied = edges.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
            let n = raw.usize("network.n").unwrap_or(implied);
            if n < 2 {
                return Err(invalid("network.n", format!("need at least 2 nodes, got {n}")));
            }
            let net = Network::from_edges(n, edges.iter().copied()).map_err(|e| network_error(key, e))?;
            Ok((net, NetworkSource::Edges { n, edges }))
        }
        other => Err(invalid(
            "network.kind",
            format!("expected \"ring\" or \"edgelist\", got \"{other}\""),
        )),
    }
}

fn resolve_deviations(raw: &RawConfig, n: usize, seed: u64) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
    let width = |key: &'static str| -> Result<f64, ConfigError> {
        let w = raw.f64(key).unwrap_or(0.0);
        if !(w.is_finite() && w >= 0.0) {
            return Err(invalid(
                key,
                format!("half-width must be finite and nonnegative, got {w}"),
            ));
        }
        Ok(w)
    };
    let (w_omega, w_alpha) = (width("oscillator.delta_omega")?, width("oscillator.delta_alpha")?);
    let (drawn_omega, drawn_alpha) = draw_deviations(n, w_omega, w_alpha, seed);
    let pick = |explicit: &'static str, width_key: &'static str, drawn: Vec<f64>| -> Result<Vec<f64>, ConfigError> {
        match raw.f64_list(explicit) {
            Some(_) if raw.has(width_key) => Err(invalid(explicit, format!("conflicts with {width_key}"))),
            Some(list) if list.len() != n => Err(invalid(explicit, format!("{} values for {n} nodes", list.len()))),
            Some(list) => Ok(list),
            None => Ok(drawn),
        }
    };
    Ok((
        pick("oscillator.omega_deviations", "oscillator.delta_omega", drawn_omega)?,
        pick("oscillator.alpha_deviations", "oscillator.delta_alpha", drawn_alpha)?,
    ))
}

fn parse_origin(text: &str) -> Result<MagnitudeOrigin, ConfigError> {
    match text {
        "drawn" => Ok(MagnitudeOrigin::Drawn),
        "explicit" => Ok(MagnitudeOrigin::Explicit),
        "equivalent" => Ok(MagnitudeOrigin::Equivalent),
        other => Err(invalid(
            "schedule.origin",
            format!("expected \"drawn\", \"explicit\" or \"equivalent\", got \"{other}\""),
        )),
    }
}

const SCHEDULE_KEYS: &[&str] = &[
    "schedule.n_pinned",
    "schedule.nodes",
    "schedule.t_p",
    "schedule.scale",
    "schedule.low",
    "schedule.high",
    "schedule.magnitudes",
    "schedule.origin",
];

fn resolve_schedule(
    raw: &RawConfig,
    n: usize,
    params: &SlParams,
    seed: u64,
) -> Result<Option<PinningSchedule>, ConfigError> {
    let mode = match raw.str("schedule.mode").unwrap_or("none") {
        "none" => {
            if let Some(key) = SCHEDULE_KEYS.iter().find(|k| raw.has(k)) {
                return Err(invalid(key, "set while schedule.mode is \"none\""));
            }
            return Ok(None);
        }
        "additive" => PinningMode::Additive,
        "parametric" => PinningMode::Parametric,
        other => {
            return Err(invalid(
                "schedule.mode",
                format!("expected \"none\", \"additive\" or \"parametric\", got \"{other}\""),
            ))
        }
    };
    let explicit_nodes = raw.has("schedule.nodes");
    let nodes = match (raw.usize_list("schedule.nodes"), raw.usize("schedule.n_pinned")) {
        (Some(_), Some(_)) => return Err(invalid("schedule.nodes", "conflicts with schedule.n_pinned")),
        (Some(list), None) => list,
        (None, Some(count)) => default_pinned_set(count, n).map_err(|e| schedule_error(e, false))?,
        (None, None) => return Err(ConfigError::Missing("schedule.n_pinned")),
    };
    let t_p = raw.f64("schedule.t_p").ok_or(ConfigError::Missing("schedule.t_p"))?;
    let count = nodes.len();

    let drawn_keys = ["schedule.scale", "schedule.low", "schedule.high"];
    let (magnitudes, default_origin) = if let Some(list) = raw.f64_list("schedule.magnitudes") {
        if let Some(key) = drawn_keys.iter().find(|k| raw.has(k)) {
            return Err(invalid(key, "conflicts with schedule.magnitudes"));
        }
        (list, MagnitudeOrigin::Explicit)
    } else {
        let interval = match (
            raw.f64("schedule.scale"),
            raw.f64("schedule.low"),
            raw.f64("schedule.high"),
        ) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(invalid(
                    "schedule.scale",
                    "give either schedule.scale or schedule.low/high",
                ))
            }
            (Some(scale), None, None) => (0.0, scale),
            (None, Some(low), Some(high)) => (low, high),
            (None, None, None) => return Err(ConfigError::Missing("schedule.scale")),
            (None, _, _) => return Err(invalid("schedule.low", "schedule.low and schedule.high go together")),
        };
        let draws = if interval.0 == 0.0 && interval.1 == 0.0 {
            vec![0.0; count]
        } else {
            let draws = draw_uniform(count, interval.0, interval.1, seed);
            if let (Some(_), Err(e)) = (raw.f64("schedule.scale"), &draws) {
                return Err(invalid("schedule.scale", e.to_string()));
            }
            draws.map_err(|e| invalid("schedule.low", e.to_string()))?
        };
        let mags = match mode {
            PinningMode::Additive => draws,
            PinningMode::Parametric => nodes
                .iter()
                .zip(draws)
                .map(|(&node, d)| params.omegas().get(node).copied().unwrap_or(f64::NAN) + d)
                .collect(),
        };
        (mags, MagnitudeOrigin::Drawn)
    };
    let origin = match raw.str("schedule.origin") {
        Some(text) => parse_origin(text)?,
        None => default_origin,
    };
    PinningSchedule::new(nodes, t_p, mode, magnitudes, seed, origin)
        .map(Some)
        .map_err(|e| schedule_error(e, explicit_nodes))
}

/// Applies defaults and overrides, draws every random quantity from the seed
/// and validates the experiment.
pub fn resolve(raw: &RawConfig, overrides: Overrides) -> Result<Resolved, ConfigError> {
    if let Some(alg) = raw.str("rng.algorithm") {
        if alg != RNG_ALGORITHM {
            return Err(invalid(
                "rng.algorithm",
                format!("only \"{RNG_ALGORITHM}\" is supported, got \"{alg}\""),
            ));
        }
    }
    let seed = overrides.seed.or(raw.seed()).unwrap_or(1);
    let model = match overrides.model {
        Some(m) => m,
        None => parse_model("model", raw.str("model").unwrap_or("full"))?,
    };

    let (network, source) = resolve_network(raw)?;
    let n = network.len();

    let alpha = raw.f64("oscillator.alpha").unwrap_or(1.0);
    let omega = raw.f64("oscillator.omega").unwrap_or(1.0);
    let threshold = raw
        .f64("oscillator.heterogeneity_threshold")
        .unwrap_or(DEFAULT_HETEROGENEITY_THRESHOLD);
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(invalid(
            "oscillator.heterogeneity_threshold",
            format!("must be finite and nonnegative, got {threshold}"),
        ));
    }
    let (omega_deviations, alpha_deviations) = resolve_deviations(raw, n, seed)?;
    let params =
        SlParams::heterogeneous(alpha, omega, &alpha_deviations, &omega_deviations, threshold).map_err(param_error)?;

    let epsilon = raw
        .f64("coupling.epsilon")
        .ok_or(ConfigError::Missing("coupling.epsilon"))?;
    let unit = match raw.get("coupling.d_unit") {
        Some(Value::Array(rows)) => {
            let row = |r: &Value| -> [f64; 2] {
                let c = r.as_array().map(Vec::as_slice).unwrap_or(&[]);
                [as_f64(&c[0]), as_f64(&c[1])]
            };
            [row(&rows[0]), row(&rows[1])]
        }
        _ => CouplingMatrix::STANDARD_UNIT,
    };
    let coupling = CouplingMatrix::new(epsilon, unit).map_err(param_error)?;

    let dt = raw.f64("integrator.dt").unwrap_or(0.01);
    let horizon = raw.f64("integrator.horizon").unwrap_or(50.0);
    let record_every = raw.usize("integrator.record_every").unwrap_or(1);
    let integrator = IntegratorConfig::new(dt, horizon, record_every).map_err(|e| {
        use slpin_core::sim::IntegratorError as E;
        let key = match e {
            E::InvalidStep(_) => "integrator.dt",
            E::HorizonTooShort { .. } | E::FractionalSteps { .. } => "integrator.horizon",
            E::RecordEvery { .. } => "integrator.record_every",
        };
        invalid(key, e.to_string())
    })?;

    let schedule = resolve_schedule(raw, n, &params, seed)?;
    if let Some(s) = &schedule {
        s.validate_for(n, horizon)
            .map_err(|e| schedule_error(e, raw.has("schedule.nodes")))?;
    }

    let initial_phases = match raw.f64_list("initial.phases") {
        Some(p) if p.len() != n => return Err(invalid("initial.phases", format!("{} phases for {n} nodes", p.len()))),
        Some(p) if p.iter().any(|v| !v.is_finite()) => return Err(invalid("initial.phases", "phases must be finite")),
        Some(p) => p,
        None => draw_initial_phases(n, seed),
    };

    let experiment = Experiment {
        network,
        params,
        coupling,
        schedule,
        integrator,
        model,
        seed,
        initial_phases: Some(initial_phases),
    };
    experiment.validate().map_err(|e| invalid("config", e.to_string()))?;
    Ok(Resolved {
        experiment,
        source,
        omega_deviations,
        alpha_deviations,
        heterogeneity_threshold: threshold,
        output_dir: raw.str("output.dir").map(|d| raw.base_dir.join(d)),
    })
}

fn floats(values: &[f64]) -> Value {
    Value::Array(values.iter().map(|&v| Value::Float(v)).collect())
}

impl Resolved {
    /// The resolved config as flat dotted-key text. Parsing it back and
    /// resolving with no overrides reproduces [`Resolved::experiment`].
    pub fn to_cfg(&self) -> String {
        let exp = &self.experiment;
        let mut lines: Vec<(&str, Value)> = Vec::new();
        match &self.source {
            NetworkSource::Ring { n, k } => {
                lines.push(("network.kind", Value::String("ring".into())));
                lines.push(("network.n", Value::Integer(*n as i64)));
                lines.push(("network.k", Value::Integer(*k as i64)));
            }
            NetworkSource::Edges { n, edges } => {
                lines.push(("network.kind", Value::String("edgelist".into())));
                lines.push(("network.n", Value::Integer(*n as i64)));
                let list = edges
                    .iter()
                    .map(|&(i, j, w)| {
                        Value::Array(vec![
                            Value::Integer(i as i64),
                            Value::Integer(j as i64),
                            Value::Float(w),
                        ])
                    })
                    .collect();
                lines.push(("network.edges", Value::Array(list)));
            }
        }
        lines.push(("oscillator.alpha", Value::Float(exp.params.base_alpha())));
        lines.push(("oscillator.omega", Value::Float(exp.params.base_omega())));
        lines.push((
            "oscillator.heterogeneity_threshold",
            Value::Float(self.heterogeneity_threshold),
        ));
        lines.push(("oscillator.omega_deviations", floats(&self.omega_deviations)));
        lines.push(("oscillator.alpha_deviations", floats(&self.alpha_deviations)));
        lines.push(("coupling.epsilon", Value::Float(exp.coupling.epsilon())));
        let unit = exp.coupling.unit();
        lines.push((
            "coupling.d_unit",
            Value::Array(vec![floats(&unit[0]), floats(&unit[1])]),
        ));
        match &exp.schedule {
            None => lines.push(("schedule.mode", Value::String("none".into()))),
            Some(s) => {
                lines.push(("schedule.mode", Value::String(s.mode().as_str().into())));
                lines.push((
                    "schedule.nodes",
                    Value::Array(s.pinned().iter().map(|&i| Value::Integer(i as i64)).collect()),
                ));
                lines.push(("schedule.t_p", Value::Float(s.t_p())));
                lines.push(("schedule.magnitudes", floats(s.magnitudes())));
                lines.push(("schedule.origin", Value::String(s.origin().as_str().into())));
            }
        }
        lines.push(("integrator.dt", Value::Float(exp.integrator.dt())));
        lines.push(("integrator.horizon", Value::Float(exp.integrator.horizon())));
        lines.push((
            "integrator.record_every",
            Value::Integer(exp.integrator.record_every() as i64),
        ));
        lines.push(("model", Value::String(exp.model.as_str().into())));
        lines.push((
            "seed",
            i64::try_from(exp.seed).map_or_else(|_| Value::String(exp.seed.to_string()), Value::Integer),
        ));
        lines.push(("rng.algorithm", Value::String(RNG_ALGORITHM.into())));
        lines.push(("initial.phases", floats(&exp.initial_phases())));

        let mut out = String::new();
        for (key, value) in lines {
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}
