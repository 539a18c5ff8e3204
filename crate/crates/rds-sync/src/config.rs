//! The experiment configuration file format.
//!
//! A config is UTF-8 text, one `key = value` per line, with `#` starting a
//! comment. The lift is chosen by a small expression (`sine(a=0.1)`,
//! `rotation(c=0.25)`, or `fourier` together with a `harmonics` list of
//! `(j, a_j, b_j)` tuples). Every omitted key takes a documented default, and
//! [`ExperimentConfig::to_config_string`] materialises all of them, so a
//! config round-trips losslessly: `parse(render(c)) == c`.
//!
//! Errors distinguish *parse* problems (malformed line, bad number — reported
//! with the line number) from *semantic* problems (valid syntax, invalid
//! value — reported with the key).

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("key `{key}`: {message}")]
    Semantic { key: String, message: String },
}

/// Which experiment a run executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Simulate,
    Lyapunov,
    Subperiods,
    Contract,
    Access,
    Sync,
    Stability,
    Pullback,
    Verdict,
    Sweep,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Simulate,
        ExperimentKind::Lyapunov,
        ExperimentKind::Subperiods,
        ExperimentKind::Contract,
        ExperimentKind::Access,
        ExperimentKind::Sync,
        ExperimentKind::Stability,
        ExperimentKind::Pullback,
        ExperimentKind::Verdict,
        ExperimentKind::Sweep,
    ];
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Lyapunov => "lyapunov",
            ExperimentKind::Subperiods => "subperiods",
            ExperimentKind::Contract => "contract",
            ExperimentKind::Access => "access",
            ExperimentKind::Sync => "sync",
            ExperimentKind::Stability => "stability",
            ExperimentKind::Pullback => "pullback",
            ExperimentKind::Verdict => "verdict",
            ExperimentKind::Sweep => "sweep",
        };
        f.write_str(s)
    }
}

impl FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<ExperimentKind, String> {
        ExperimentKind::ALL
            .iter()
            .copied()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// The lift selection in a config.
#[derive(Clone, Debug, PartialEq)]
pub enum LiftSpec {
    Sine {
        a: f64,
    },
    Rotation {
        c: f64,
    },
    /// Coefficients live in the separate `harmonics` key.
    Fourier {
        harmonics: Vec<(u32, f64, f64)>,
    },
}

impl LiftSpec {
    /// Builds the runtime lift. The parameters were validated at parse
    /// time, so construction cannot fail.
    pub fn to_lift(&self) -> crate::lift::Lift {
        use crate::lift::{FourierTerm, Lift};
        match self {
            LiftSpec::Sine { a } => Lift::sine(*a),
            LiftSpec::Rotation { c } => Lift::rotation(*c),
            LiftSpec::Fourier { harmonics } => Lift::fourier(
                harmonics
                    .iter()
                    .map(|&(j, a, b)| FourierTerm::new(j, a, b))
                    .collect(),
            )
            .expect("harmonics validated at parse time"),
        }
    }
}

/// A fully materialised experiment configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub lift: LiftSpec,
    pub experiment: Option<ExperimentKind>,
    pub seed: u64,
    pub out: String,
    // Budgets.
    pub horizon: u64,
    pub n_samples: u64,
    pub n_pairs: usize,
    pub n_steps: u64,
    pub lyap_samples: u64,
    pub window: u64,
    pub record_every: u64,
    pub grid_size: usize,
    pub pullback_steps: u64,
    pub pullback_grid: usize,
    pub n_streams: u64,
    pub n_sources: usize,
    pub n_arcs: usize,
    pub access_horizon: u64,
    pub access_samples: u64,
    pub ensemble_size: usize,
    // Thresholds and geometry.
    pub eps_sync: f64,
    pub quad_tol: f64,
    pub subperiod_tol: f64,
    pub contract_margin: f64,
    pub merge_radius: f64,
    pub cluster_tol: f64,
    pub arc_radius: f64,
    pub epsilon: f64,
    pub radii: Vec<f64>,
    pub deltas: Vec<f64>,
    pub x0: f64,
    pub rational_max_denominator: u64,
    pub rational_tol: f64,
    pub consistency_sigma: f64,
    // Sweep.
    pub sweep_param: Option<String>,
    pub sweep_from: f64,
    pub sweep_to: f64,
    pub sweep_step: f64,
}

impl Default for ExperimentConfig {
    fn default() -> ExperimentConfig {
        ExperimentConfig {
            lift: LiftSpec::Sine { a: 0.1 },
            experiment: None,
            seed: 0,
            out: "out".to_string(),
            horizon: 2000,
            n_samples: 200,
            n_pairs: 20,
            n_steps: 200,
            lyap_samples: 10_000,
            window: 50,
            record_every: 50,
            grid_size: 4096,
            pullback_steps: 500,
            pullback_grid: 1024,
            n_streams: 100,
            n_sources: 8,
            n_arcs: 8,
            access_horizon: 500,
            access_samples: 100,
            ensemble_size: 32,
            eps_sync: 1e-9,
            quad_tol: 1e-8,
            subperiod_tol: 1e-9,
            contract_margin: 1e-12,
            merge_radius: 0.02,
            cluster_tol: 1e-6,
            arc_radius: 0.05,
            epsilon: 0.1,
            radii: vec![0.01, 0.02, 0.05, 0.1],
            deltas: vec![0.005, 0.01, 0.02, 0.05],
            x0: 0.0,
            rational_max_denominator: 10_000,
            rational_tol: 1e-12,
            consistency_sigma: 5.0,
            sweep_param: None,
            sweep_from: 0.01,
            sweep_to: 0.3,
            sweep_step: 0.01,
        }
    }
}

impl ExperimentConfig {
    /// Renders the config with *every* key explicit, in a fixed order.
    /// Parsing the result reproduces `self` exactly.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        s.push_str("# experiment configuration (all defaults materialised)\n");
        match &self.lift {
            LiftSpec::Sine { a } => s.push_str(&format!("lift = sine(a={a})\n")),
            LiftSpec::Rotation { c } => s.push_str(&format!("lift = rotation(c={c})\n")),
            LiftSpec::Fourier { harmonics } => {
                s.push_str("lift = fourier\n");
                let tuples: Vec<String> = harmonics
                    .iter()
                    .map(|(j, a, b)| format!("({j}, {a}, {b})"))
                    .collect();
                s.push_str(&format!("harmonics = [{}]\n", tuples.join(", ")));
            }
        }
        if let Some(kind) = self.experiment {
            s.push_str(&format!("experiment = {kind}\n"));
        }
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("out = {}\n", self.out));
        s.push_str("# budgets\n");
        s.push_str(&format!("horizon = {}\n", self.horizon));
        s.push_str(&format!("n_samples = {}\n", self.n_samples));
        s.push_str(&format!("n_pairs = {}\n", self.n_pairs));
        s.push_str(&format!("n_steps = {}\n", self.n_steps));
        s.push_str(&format!("lyap_samples = {}\n", self.lyap_samples));
        s.push_str(&format!("window = {}\n", self.window));
        s.push_str(&format!("record_every = {}\n", self.record_every));
        s.push_str(&format!("grid_size = {}\n", self.grid_size));
        s.push_str(&format!("pullback_steps = {}\n", self.pullback_steps));
        s.push_str(&format!("pullback_grid = {}\n", self.pullback_grid));
        s.push_str(&format!("n_streams = {}\n", self.n_streams));
        s.push_str(&format!("n_sources = {}\n", self.n_sources));
        s.push_str(&format!("n_arcs = {}\n", self.n_arcs));
        s.push_str(&format!("access_horizon = {}\n", self.access_horizon));
        s.push_str(&format!("access_samples = {}\n", self.access_samples));
        s.push_str(&format!("ensemble_size = {}\n", self.ensemble_size));
        s.push_str("# thresholds and geometry\n");
        s.push_str(&format!("eps_sync = {}\n", self.eps_sync));
        s.push_str(&format!("quad_tol = {}\n", self.quad_tol));
        s.push_str(&format!("subperiod_tol = {}\n", self.subperiod_tol));
        s.push_str(&format!("contract_margin = {}\n", self.contract_margin));
        s.push_str(&format!("merge_radius = {}\n", self.merge_radius));
        s.push_str(&format!("cluster_tol = {}\n", self.cluster_tol));
        s.push_str(&format!("arc_radius = {}\n", self.arc_radius));
        s.push_str(&format!("epsilon = {}\n", self.epsilon));
        s.push_str(&format!("radii = {}\n", render_float_list(&self.radii)));
        s.push_str(&format!("deltas = {}\n", render_float_list(&self.deltas)));
        s.push_str(&format!("x0 = {}\n", self.x0));
        s.push_str(&format!(
            "rational_max_denominator = {}\n",
            self.rational_max_denominator
        ));
        s.push_str(&format!("rational_tol = {}\n", self.rational_tol));
        s.push_str(&format!("consistency_sigma = {}\n", self.consistency_sigma));
        s.push_str("# sweep\n");
        if let Some(param) = &self.sweep_param {
            s.push_str(&format!("sweep_param = {param}\n"));
        }
        s.push_str(&format!("sweep_from = {}\n", self.sweep_from));
        s.push_str(&format!("sweep_to = {}\n", self.sweep_to));
        s.push_str(&format!("sweep_step = {}\n", self.sweep_step));
        s
    }
}

fn render_float_list(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Parses a config file. See the module docs for the format.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_from(text, ExperimentConfig::default())
}

/// [`parse_config`] starting from explicit base values instead of the
/// defaults. The CLI uses this to layer the `RDS_SYNC_SEED` environment
/// variable *below* the config file: keys absent from the file keep their
/// base value.
pub fn parse_config_from(
    text: &str,
    base: ExperimentConfig,
) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = base;
    let base_lift = cfg.lift.clone();
    let mut seen: Vec<String> = Vec::new();
    let mut lift_line: Option<usize> = None;
    let mut harmonics: Option<Vec<(u32, f64, f64)>> = None;
    let mut lift_kind: Option<LiftSpec> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            message: "expected `key = value`".to_string(),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(ConfigError::Parse {
                line: line_no,
                message: "empty key".to_string(),
            });
        }
        if seen.iter().any(|k| k == key) {
            return Err(ConfigError::Semantic {
                key: key.to_string(),
                message: format!("duplicate key (second occurrence on line {line_no})"),
            });
        }
        seen.push(key.to_string());

        let parse_err = |message: String| ConfigError::Parse {
            line: line_no,
            message,
        };
        match key {
            "lift" => {
                lift_line = Some(line_no);
                lift_kind = Some(parse_lift_expr(value).map_err(parse_err)?);
            }
            "harmonics" => {
                harmonics = Some(parse_harmonic_list(value).map_err(parse_err)?);
            }
            "experiment" => {
                cfg.experiment =
                    Some(
                        ExperimentKind::from_str(value).map_err(|e| ConfigError::Semantic {
                            key: key.to_string(),
                            message: e,
                        })?,
                    );
            }
            "seed" => cfg.seed = parse_scalar(value).map_err(parse_err)?,
            "out" => {
                if value.is_empty() {
                    return Err(ConfigError::Semantic {
                        key: key.to_string(),
                        message: "output path must not be empty".to_string(),
                    });
                }
                cfg.out = value.to_string();
            }
            "horizon" => cfg.horizon = parse_scalar(value).map_err(parse_err)?,
            "n_samples" => cfg.n_samples = parse_scalar(value).map_err(parse_err)?,
            "n_pairs" => cfg.n_pairs = parse_scalar(value).map_err(parse_err)?,
            "n_steps" => cfg.n_steps = parse_scalar(value).map_err(parse_err)?,
            "lyap_samples" => cfg.lyap_samples = parse_scalar(value).map_err(parse_err)?,
            "window" => cfg.window = parse_scalar(value).map_err(parse_err)?,
            "record_every" => cfg.record_every = parse_scalar(value).map_err(parse_err)?,
            "grid_size" => cfg.grid_size = parse_scalar(value).map_err(parse_err)?,
            "pullback_steps" => cfg.pullback_steps = parse_scalar(value).map_err(parse_err)?,
            "pullback_grid" => cfg.pullback_grid = parse_scalar(value).map_err(parse_err)?,
            "n_streams" => cfg.n_streams = parse_scalar(value).map_err(parse_err)?,
            "n_sources" => cfg.n_sources = parse_scalar(value).map_err(parse_err)?,
            "n_arcs" => cfg.n_arcs = parse_scalar(value).map_err(parse_err)?,
            "access_horizon" => cfg.access_horizon = parse_scalar(value).map_err(parse_err)?,
            "access_samples" => cfg.access_samples = parse_scalar(value).map_err(parse_err)?,
            "ensemble_size" => cfg.ensemble_size = parse_scalar(value).map_err(parse_err)?,
            "eps_sync" => cfg.eps_sync = parse_scalar(value).map_err(parse_err)?,
            "quad_tol" => cfg.quad_tol = parse_scalar(value).map_err(parse_err)?,
            "subperiod_tol" => cfg.subperiod_tol = parse_scalar(value).map_err(parse_err)?,
            "contract_margin" => cfg.contract_margin = parse_scalar(value).map_err(parse_err)?,
            "merge_radius" => cfg.merge_radius = parse_scalar(value).map_err(parse_err)?,
            "cluster_tol" => cfg.cluster_tol = parse_scalar(value).map_err(parse_err)?,
            "arc_radius" => cfg.arc_radius = parse_scalar(value).map_err(parse_err)?,
            "epsilon" => cfg.epsilon = parse_scalar(value).map_err(parse_err)?,
            "radii" => cfg.radii = parse_float_list(value).map_err(parse_err)?,
            "deltas" => cfg.deltas = parse_float_list(value).map_err(parse_err)?,
            "x0" => cfg.x0 = parse_scalar(value).map_err(parse_err)?,
            "rational_max_denominator" => {
                cfg.rational_max_denominator = parse_scalar(value).map_err(parse_err)?
            }
            "rational_tol" => cfg.rational_tol = parse_scalar(value).map_err(parse_err)?,
            "consistency_sigma" => {
                cfg.consistency_sigma = parse_scalar(value).map_err(parse_err)?
            }
            "sweep_param" => cfg.sweep_param = Some(value.to_string()),
            "sweep_from" => cfg.sweep_from = parse_scalar(value).map_err(parse_err)?,
            "sweep_to" => cfg.sweep_to = parse_scalar(value).map_err(parse_err)?,
            "sweep_step" => cfg.sweep_step = parse_scalar(value).map_err(parse_err)?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })
            }
        }
    }

    cfg.lift = assemble_lift(lift_kind, harmonics, base_lift, lift_line)?;
    validate(&cfg)?;
    Ok(cfg)
}

fn assemble_lift(
    kind: Option<LiftSpec>,
    harmonics: Option<Vec<(u32, f64, f64)>>,
    base_lift: LiftSpec,
    _lift_line: Option<usize>,
) -> Result<LiftSpec, ConfigError> {
    match (kind, harmonics) {
        (None, None) => Ok(base_lift),
        (None, Some(_)) => Err(ConfigError::Semantic {
            key: "harmonics".to_string(),
            message: "harmonics requires `lift = fourier`".to_string(),
        }),
        (Some(LiftSpec::Fourier { .. }), None) => Err(ConfigError::Semantic {
            key: "lift".to_string(),
            message: "`lift = fourier` requires a `harmonics` list".to_string(),
        }),
        (Some(LiftSpec::Fourier { .. }), Some(h)) => Ok(LiftSpec::Fourier { harmonics: h }),
        (Some(other), None) => Ok(other),
        (Some(_), Some(_)) => Err(ConfigError::Semantic {
            key: "harmonics".to_string(),
            message: "harmonics is only valid with `lift = fourier`".to_string(),
        }),
    }
}

/// Parses `sine(a=0.1)`, `rotation(c=0.25)` or `fourier`.
pub fn parse_lift_expr(text: &str) -> Result<LiftSpec, String> {
    let text = text.trim();
    if text == "fourier" {
        return Ok(LiftSpec::Fourier {
            harmonics: Vec::new(),
        });
    }
    let open = text.find('(').ok_or_else(|| {
        format!("lift `{text}` is not one of sine(a=..), rotation(c=..), fourier")
    })?;
    if !text.ends_with(')') {
        return Err("lift expression missing closing `)`".to_string());
    }
    let name = text[..open].trim();
    let args = &text[open + 1..text.len() - 1];
    let (param, value) = args
        .split_once('=')
        .ok_or_else(|| format!("lift argument `{args}` is not `name=value`"))?;
    let param = param.trim();
    let value: f64 = parse_f64(value.trim())?;
    match (name, param) {
        ("sine", "a") => Ok(LiftSpec::Sine { a: value }),
        ("rotation", "c") => Ok(LiftSpec::Rotation { c: value }),
        ("sine", other) => Err(format!("sine takes `a`, not `{other}`")),
        ("rotation", other) => Err(format!("rotation takes `c`, not `{other}`")),
        ("fourier", _) => {
            Err("fourier takes no arguments; coefficients go in `harmonics`".to_string())
        }
        (other, _) => Err(format!("unknown lift kind `{other}`")),
    }
}

/// Parses `[(j, a, b), (j, a, b), ...]`.
pub fn parse_harmonic_list(text: &str) -> Result<Vec<(u32, f64, f64)>, String> {
    let inner = strip_brackets(text)?;
    let mut out = Vec::new();
    for item in split_tuples(inner)? {
        let fields: Vec<&str> = item.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(format!(
                "harmonic tuple `({item})` must have exactly three fields (j, a, b)"
            ));
        }
        let j: u32 = fields[0].parse().map_err(|_| {
            format!(
                "harmonic index `{}` is not a non-negative integer",
                fields[0]
            )
        })?;
        let a = parse_f64(fields[1])?;
        let b = parse_f64(fields[2])?;
        out.push((j, a, b));
    }
    Ok(out)
}

/// Parses `[0.01, 0.02, ...]`.
pub fn parse_float_list(text: &str) -> Result<Vec<f64>, String> {
    let inner = strip_brackets(text)?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|s| parse_f64(s.trim())).collect()
}

fn strip_brackets(text: &str) -> Result<&str, String> {
    let text = text.trim();
    if !text.starts_with('[') || !text.ends_with(']') {
        return Err("list must be enclosed in [ ... ]".to_string());
    }
    Ok(&text[1..text.len() - 1])
}

/// Splits `(a, b, c), (d, e, f)` into the tuple bodies.
fn split_tuples(inner: &str) -> Result<Vec<&str>, String> {
    let mut items = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(format!("expected `(` at `{rest}`"));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| "unclosed `(` in harmonics list".to_string())?;
        items.push(&rest[1..close]);
        rest = rest[close + 1..].trim_start();
        if let Some(stripped) = rest.strip_prefix(',') {
            rest = stripped.trim_start();
            if rest.is_empty() {
                return Err("trailing comma in harmonics list".to_string());
            }
        } else if !rest.is_empty() {
            return Err(format!("expected `,` between tuples at `{rest}`"));
        }
    }
    Ok(items)
}

fn parse_f64(text: &str) -> Result<f64, String> {
    let v: f64 = text
        .parse()
        .map_err(|_| format!("`{text}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(v)
}

trait ConfigScalar: Sized {
    fn parse_from(text: &str) -> Result<Self, String>;
}

impl ConfigScalar for u64 {
    fn parse_from(text: &str) -> Result<u64, String> {
        text.parse()
            .map_err(|_| format!("`{text}` is not a non-negative integer"))
    }
}

impl ConfigScalar for usize {
    fn parse_from(text: &str) -> Result<usize, String> {
        text.parse()
            .map_err(|_| format!("`{text}` is not a non-negative integer"))
    }
}

impl ConfigScalar for f64 {
    fn parse_from(text: &str) -> Result<f64, String> {
        parse_f64(text)
    }
}

fn parse_scalar<T: ConfigScalar>(text: &str) -> Result<T, String> {
    T::parse_from(text)
}

fn validate(cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let err = |key: &str, message: String| {
        Err(ConfigError::Semantic {
            key: key.to_string(),
            message,
        })
    };
    if let LiftSpec::Fourier { harmonics } = &cfg.lift {
        let mut indices: Vec<u32> = Vec::new();
        for &(j, a, b) in harmonics {
            if j == 0 {
                return err("harmonics", "harmonic index must be >= 1".to_string());
            }
            if !a.is_finite() || !b.is_finite() {
                return err("harmonics", format!("non-finite coefficient at j={j}"));
            }
            if indices.contains(&j) {
                return err("harmonics", format!("duplicate harmonic index {j}"));
            }
            indices.push(j);
        }
    }
    if let LiftSpec::Sine { a } = cfg.lift {
        if !a.is_finite() {
            return err("lift", "sine coefficient must be finite".to_string());
        }
    }
    if let LiftSpec::Rotation { c } = cfg.lift {
        if !c.is_finite() {
            return err("lift", "rotation offset must be finite".to_string());
        }
    }
    if cfg.horizon < 1 {
        return err("horizon", "must be at least 1".to_string());
    }
    if cfg.n_samples < 1 {
        return err("n_samples", "must be at least 1".to_string());
    }
    if cfg.n_pairs < 1 {
        return err("n_pairs", "must be at least 1".to_string());
    }
    if cfg.n_steps < 1 {
        return err("n_steps", "must be at least 1".to_string());
    }
    if cfg.lyap_samples < 2 {
        return err(
            "lyap_samples",
            "need at least 2 samples for a stderr".to_string(),
        );
    }
    if cfg.window < 1 || cfg.window > cfg.horizon {
        return err(
            "window",
            format!("must lie in 1..=horizon ({})", cfg.horizon),
        );
    }
    if cfg.record_every < 1 {
        return err("record_every", "must be at least 1".to_string());
    }
    if cfg.grid_size < 256 {
        return err("grid_size", "must be at least 256".to_string());
    }
    if cfg.pullback_steps < 1 {
        return err("pullback_steps", "must be at least 1".to_string());
    }
    if cfg.pullback_grid < 64 {
        return err("pullback_grid", "must be at least 64".to_string());
    }
    if cfg.n_streams < 1 {
        return err("n_streams", "must be at least 1".to_string());
    }
    if cfg.n_sources < 1 {
        return err("n_sources", "must be at least 1".to_string());
    }
    if cfg.n_arcs < 1 {
        return err("n_arcs", "must be at least 1".to_string());
    }
    if cfg.access_horizon < 1 {
        return err("access_horizon", "must be at least 1".to_string());
    }
    if cfg.access_samples < 1 {
        return err("access_samples", "must be at least 1".to_string());
    }
    if cfg.ensemble_size < 2 {
        return err("ensemble_size", "must be at least 2".to_string());
    }
    for (key, v) in [
        ("eps_sync", cfg.eps_sync),
        ("quad_tol", cfg.quad_tol),
        ("subperiod_tol", cfg.subperiod_tol),
        ("cluster_tol", cfg.cluster_tol),
        ("rational_tol", cfg.rational_tol),
    ] {
        if !v.is_finite() || v <= 0.0 {
            return err(key, "must be a positive number".to_string());
        }
    }
    if !cfg.contract_margin.is_finite() || cfg.contract_margin < 0.0 {
        return err("contract_margin", "must be non-negative".to_string());
    }
    if !(cfg.merge_radius > 0.0 && cfg.merge_radius < 0.5) {
        return err("merge_radius", "must lie in (0, 0.5)".to_string());
    }
    if !(cfg.arc_radius > 0.0 && cfg.arc_radius <= 0.5) {
        return err("arc_radius", "must lie in (0, 0.5]".to_string());
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon <= 0.5) {
        return err("epsilon", "must lie in (0, 0.5]".to_string());
    }
    if cfg.radii.is_empty() {
        return err("radii", "must not be empty".to_string());
    }
    for &r in &cfg.radii {
        if !(r > 0.0 && r <= 0.25) {
            return err("radii", format!("radius {r} must lie in (0, 0.25]"));
        }
    }
    if cfg.deltas.is_empty() {
        return err("deltas", "must not be empty".to_string());
    }
    for &d in &cfg.deltas {
        if !(d > 0.0 && d <= 0.25) {
            return err("deltas", format!("delta {d} must lie in (0, 0.25]"));
        }
        if d > cfg.epsilon {
            return err(
                "deltas",
                format!("delta {d} exceeds epsilon {}", cfg.epsilon),
            );
        }
    }
    if !cfg.x0.is_finite() {
        return err("x0", "must be finite".to_string());
    }
    if cfg.rational_max_denominator < 1 {
        return err("rational_max_denominator", "must be at least 1".to_string());
    }
    if !cfg.consistency_sigma.is_finite() || cfg.consistency_sigma <= 0.0 {
        return err("consistency_sigma", "must be positive".to_string());
    }
    // The sweep range is validated even when no sweep is requested, so an
    // accepted config never carries non-finite values in any float key.
    for (key, v) in [("sweep_from", cfg.sweep_from), ("sweep_to", cfg.sweep_to)] {
        if !v.is_finite() {
            return err(key, "must be finite".to_string());
        }
    }
    if !cfg.sweep_step.is_finite() || cfg.sweep_step <= 0.0 {
        return err("sweep_step", "must be positive".to_string());
    }
    if let Some(param) = &cfg.sweep_param {
        match (param.as_str(), &cfg.lift) {
            ("a", LiftSpec::Sine { .. }) | ("c", LiftSpec::Rotation { .. }) => {}
            ("a", _) => {
                return err("sweep_param", "`a` requires `lift = sine(..)`".to_string());
            }
            ("c", _) => {
                return err(
                    "sweep_param",
                    "`c` requires `lift = rotation(..)`".to_string(),
                );
            }
            (other, _) => {
                return err("sweep_param", format!("unknown sweep parameter `{other}`"));
            }
        }
        if cfg.sweep_from > cfg.sweep_to {
            return err(
                "sweep_from",
                "sweep range must satisfy from <= to".to_string(),
            );
        }
    }
    Ok(())
}
