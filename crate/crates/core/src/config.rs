//! Run configuration: a flat `key = value` text format.
//!
//! Lines starting with `#` and everything after a `#` are comments. The
//! `case` key selects the benchmark and with it the defaults of every other
//! key; any key given explicitly overrides its default. Unknown and repeated
//! keys are errors.

use std::f64::consts::TAU;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::cases::{BenchmarkCase, CaseKind, CaseParams};
use crate::dynamics::{IntegratorConfig, Scheme};
use crate::output::format_f64;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key '{key}'")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key '{key}' already set on line {first}")]
    DuplicateKey { line: usize, key: String, first: usize },
    #[error("line {line}: invalid value for '{key}': {message}")]
    InvalidValue { line: usize, key: String, message: String },
    #[error("{}'{key}' out of range: {message}", line_prefix(*.line))]
    OutOfRange {
        line: Option<usize>,
        key: String,
        message: String,
    },
    #[error("missing required key 'case'")]
    MissingCase,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// Interpolation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Piecewise,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Direct => "direct",
            Method::Piecewise => "pw",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Method::Direct),
            "pw" => Ok(Method::Piecewise),
            other => Err(format!("unknown method '{other}' (expected direct or pw)")),
        }
    }
}

/// What a snapshot subtracts from `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    None,
    Maxwellian,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Reference::None => "none",
            Reference::Maxwellian => "maxwellian",
        }
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Reference::None),
            "maxwellian" => Ok(Reference::Maxwellian),
            other => Err(format!("unknown reference '{other}' (expected none or maxwellian)")),
        }
    }
}

/// Named parameter set for `print-defaults`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// The published setups.
    Paper,
    /// Reduced resolution and end time, sized for a laptop or CI machine.
    Ci,
    /// Paper setup run to `t = 2000`.
    Long,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Paper => "paper",
            Preset::Ci => "ci",
            Preset::Long => "long",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Preset::Paper),
            "ci" => Ok(Preset::Ci),
            "long" => Ok(Preset::Long),
            other => Err(format!("unknown preset '{other}' (expected paper, ci or long)")),
        }
    }
}

/// Particle grid `nx × nv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub nx: usize,
    pub nv: usize,
}

impl Resolution {
    pub fn new(nx: usize, nv: usize) -> Self {
        Self { nx, nv }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nx, self.nv)
    }
}

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('x')
            .ok_or_else(|| format!("expected '<nx>x<nv>', got '{s}'"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}' in '{s}': {e}"));
        Ok(Self::new(parse(a)?, parse(b)?))
    }
}

/// Everything a run or a convergence study needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: BenchmarkCase,
    pub method: Method,
    pub nx: usize,
    pub nv: usize,
    pub order: u32,
    pub sigma_x: f64,
    pub sigma_v: f64,
    pub mu: f64,
    pub n_box: usize,
    pub poisson_cells: usize,
    pub integrator: IntegratorConfig,
    pub t_end: f64,
    pub amplitude_grid: usize,
    pub snapshot_times: Vec<f64>,
    pub snapshot_nx: usize,
    pub snapshot_nv: usize,
    pub snapshot_reference: Reference,
    pub study_resolutions: Vec<Resolution>,
    pub reference_resolution: Resolution,
    /// `None` leaves the choice to the caller.
    pub output_dir: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
}

const KEYS: &[&str] = &[
    "case",
    "alpha",
    "k",
    "length",
    "v_max",
    "n_p",
    "n_b",
    "v_b",
    "v_t",
    "method",
    "nx",
    "nv",
    "order",
    "sigma_x",
    "sigma_v",
    "mu",
    "n_box",
    "poisson_cells",
    "integrator",
    "dt",
    "t_end",
    "amplitude_grid",
    "snapshot_times",
    "snapshot_nx",
    "snapshot_nv",
    "snapshot_reference",
    "study_resolutions",
    "reference_resolution",
    "output_dir",
    "threads",
];

impl RunConfig {
    /// Default piecewise setup of a benchmark.
    pub fn defaults(kind: CaseKind) -> Self {
        let (nx, nv, order, sigma, dt, t_end) = match kind {
            CaseKind::WeakLandau => (512, 512, 2, (6.0, 3.0), 1.0 / 16.0, 50.0),
            CaseKind::TwoStream => (512, 1024, 4, (4.0, 2.0), 1.0 / 32.0, 50.0),
            CaseKind::BumpOnTail => (1024, 512, 2, (6.0, 3.0), 1.0 / 16.0, 100.0),
            CaseKind::FreeStreaming => (64, 64, 2, (6.0, 3.0), 1.0 / 16.0, 1.0),
        };
        let snapshot_times = match kind {
            CaseKind::FreeStreaming => vec![0.0, 1.0],
            CaseKind::BumpOnTail => vec![0.0, 25.0, 50.0, 75.0, 100.0],
            _ => vec![0.0, 10.0, 20.0, 30.0, 40.0, 50.0],
        };
        let snapshot_reference = match kind {
            CaseKind::WeakLandau | CaseKind::BumpOnTail => Reference::Maxwellian,
            _ => Reference::None,
        };
        Self {
            case: BenchmarkCase::new(kind),
            method: Method::Piecewise,
            nx,
            nv,
            order,
            sigma_x: sigma.0,
            sigma_v: sigma.1,
            mu: 1e-5,
            n_box: 200,
            poisson_cells: 256,
            integrator: IntegratorConfig {
                scheme: Scheme::SymplecticEuler,
                dt,
            },
            t_end,
            amplitude_grid: 512,
            snapshot_times,
            snapshot_nx: 256,
            snapshot_nv: 256,
            snapshot_reference,
            study_resolutions: vec![Resolution::new(32, 32), Resolution::new(64, 64)],
            reference_resolution: Resolution::new(128, 128),
            output_dir: None,
            threads: 0,
        }
    }

    /// A named setup for `method`. Direct runs of bump-on-tail and free
    /// streaming reuse the direct Landau parameters.
    pub fn preset(kind: CaseKind, method: Method, preset: Preset) -> Self {
        let mut c = Self::defaults(kind);
        if method == Method::Direct {
            c.method = Method::Direct;
            let (nx, nv, order, sigma, dt) = match kind {
                CaseKind::TwoStream => (64, 128, 4, (2.0, 1.0), 0.25),
                _ => (32, 32, 2, (3.0, 1.0), 0.125),
            };
            (c.nx, c.nv, c.order, c.sigma_x, c.sigma_v) = (nx, nv, order, sigma.0, sigma.1);
            c.integrator = IntegratorConfig {
                scheme: Scheme::Rk4,
                dt,
            };
            c.study_resolutions = vec![Resolution::new(16, 16), Resolution::new(32, 32)];
            c.reference_resolution = Resolution::new(64, 64);
        }
        match preset {
            Preset::Paper => {}
            Preset::Long => {
                c.t_end = 2000.0;
                c.snapshot_times.push(2000.0);
            }
            Preset::Ci => {
                let (nx, nv, t_end) = match (method, kind) {
                    (Method::Piecewise, CaseKind::WeakLandau) => (128, 128, 25.0),
                    (Method::Piecewise, CaseKind::TwoStream) => (128, 256, 30.0),
                    (Method::Piecewise, CaseKind::BumpOnTail) => (256, 128, 50.0),
                    (Method::Piecewise, CaseKind::FreeStreaming) => (64, 64, 1.0),
                    (Method::Direct, CaseKind::WeakLandau) => (32, 32, 35.0),
                    (Method::Direct, CaseKind::TwoStream) => (32, 64, 30.0),
                    (Method::Direct, CaseKind::BumpOnTail) => (32, 32, 20.0),
                    (Method::Direct, CaseKind::FreeStreaming) => (32, 32, 1.0),
                };
                (c.nx, c.nv, c.t_end) = (nx, nv, t_end);
                c.snapshot_nx = 128;
                c.snapshot_nv = 128;
                c.snapshot_times.retain(|&t| t <= t_end);
                c.t_end = t_end;
            }
        }
        c
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }

    /// Serializes every key; parsing the result gives back `self`.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let p = &self.case.params;
        let mut line = |key: &str, value: String| {
            let _ = writeln!(s, "{key} = {value}");
        };
        line("case", self.case.kind.to_string());
        line("alpha", format_f64(p.alpha));
        line("k", format_f64(p.k));
        line("length", format_f64(p.length));
        line("v_max", format_f64(p.v_max));
        if self.case.kind == CaseKind::BumpOnTail {
            line("n_p", format_f64(p.n_p));
            line("n_b", format_f64(p.n_b));
            line("v_b", format_f64(p.v_b));
            line("v_t", format_f64(p.v_t));
        }
        line("method", self.method.to_string());
        line("nx", self.nx.to_string());
        line("nv", self.nv.to_string());
        line("order", self.order.to_string());
        line("sigma_x", format_f64(self.sigma_x));
        line("sigma_v", format_f64(self.sigma_v));
        line("mu", format_f64(self.mu));
        line("n_box", self.n_box.to_string());
        line("poisson_cells", self.poisson_cells.to_string());
        line("integrator", self.integrator.scheme.to_string());
        line("dt", format_f64(self.integrator.dt));
        line("t_end", format_f64(self.t_end));
        line("amplitude_grid", self.amplitude_grid.to_string());
        line(
            "snapshot_times",
            join(self.snapshot_times.iter().map(|&t| format_f64(t))),
        );
        line("snapshot_nx", self.snapshot_nx.to_string());
        line("snapshot_nv", self.snapshot_nv.to_string());
        line("snapshot_reference", self.snapshot_reference.to_string());
        line(
            "study_resolutions",
            join(self.study_resolutions.iter().map(|r| r.to_string())),
        );
        line("reference_resolution", self.reference_resolution.to_string());
        if let Some(dir) = &self.output_dir {
            line("output_dir", dir.display().to_string());
        }
        line("threads", self.threads.to_string());
        s
    }

    fn validate(&self, lines: &Entries) -> Result<(), ConfigError> {
        let range = |key: &str, ok: bool, message: &str| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange {
                    line: lines.line_of(key),
                    key: key.to_string(),
                    message: message.to_string(),
                })
            }
        };
        let p = &self.case.params;
        range(
            "alpha",
            p.alpha.is_finite() && p.alpha >= 0.0,
            "must be finite and >= 0",
        )?;
        range("k", p.k.is_finite() && p.k > 0.0, "must be finite and > 0")?;
        range(
            "length",
            p.length.is_finite() && p.length > 0.0,
            "must be finite and > 0",
        )?;
        range("v_max", p.v_max.is_finite() && p.v_max > 0.0, "must be finite and > 0")?;
        range("n_p", p.n_p.is_finite() && p.n_p >= 0.0, "must be finite and >= 0")?;
        range("n_b", p.n_b.is_finite() && p.n_b >= 0.0, "must be finite and >= 0")?;
        range("v_b", p.v_b.is_finite(), "must be finite")?;
        range("v_t", p.v_t.is_finite() && p.v_t > 0.0, "must be finite and > 0")?;
        range("nx", self.nx >= 2, "must be >= 2")?;
        range("nv", self.nv >= 2, "must be >= 2")?;
        range("order", matches!(self.order, 2 | 4), "must be 2 or 4")?;
        range(
            "sigma_x",
            self.sigma_x.is_finite() && self.sigma_x > 0.0,
            "must be finite and > 0",
        )?;
        range(
            "sigma_v",
            self.sigma_v.is_finite() && self.sigma_v > 0.0,
            "must be finite and > 0",
        )?;
        range("mu", self.mu.is_finite() && self.mu >= 0.0, "must be finite and >= 0")?;
        range("n_box", self.n_box >= 2, "must be >= 2")?;
        range("poisson_cells", self.poisson_cells >= 8, "must be >= 8")?;
        let dt = self.integrator.dt;
        range("dt", dt.is_finite() && dt > 0.0, "must be finite and > 0")?;
        range(
            "t_end",
            self.t_end.is_finite() && self.t_end >= 0.0,
            "must be finite and >= 0",
        )?;
        range("amplitude_grid", self.amplitude_grid >= 2, "must be >= 2")?;
        range(
            "snapshot_times",
            self.snapshot_times.iter().all(|t| t.is_finite() && *t >= 0.0),
            "times must be finite and >= 0",
        )?;
        range("snapshot_nx", self.snapshot_nx >= 1, "must be >= 1")?;
        range("snapshot_nv", self.snapshot_nv >= 2, "must be >= 2")?;
        range(
            "study_resolutions",
            self.study_resolutions.iter().all(|r| r.nx >= 2 && r.nv >= 2),
            "every resolution needs at least 2 cells per direction",
        )?;
        let reference = self.reference_resolution;
        range(
            "reference_resolution",
            reference.nx >= 2 && reference.nv >= 2,
            "needs at least 2 cells per direction",
        )?;
        for (key, sigma) in [("sigma_x", self.sigma_x), ("sigma_v", self.sigma_v)] {
            if !(1.0..=6.0).contains(&sigma) {
                log::warn!("{key} = {sigma} is outside the tested range [1, 6]");
            }
        }
        Ok(())
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(", ")
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

struct Entries(Vec<Entry>);

impl Entries {
    fn line_of(&self, key: &str) -> Option<usize> {
        self.0.iter().find(|e| e.key == key).map(|e| e.line)
    }
}

fn parse_value<T: FromStr>(entry: &Entry) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    entry.value.parse::<T>().map_err(|e| ConfigError::InvalidValue {
        line: entry.line,
        key: entry.key.clone(),
        message: e.to_string(),
    })
}

/// Accepts plain numbers and fractions such as `1/16`.
fn parse_real(entry: &Entry) -> Result<f64, ConfigError> {
    let invalid = |message: String| ConfigError::InvalidValue {
        line: entry.line,
        key: entry.key.clone(),
        message,
    };
    let number = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| invalid(format!("'{}': {e}", t.trim())))
    };
    match entry.value.split_once('/') {
        Some((a, b)) => Ok(number(a)? / number(b)?),
        None => number(&entry.value),
    }
}

fn parse_list<T>(entry: &Entry, item: impl Fn(&Entry) -> Result<T, ConfigError>) -> Result<Vec<T>, ConfigError> {
    if entry.value.trim().is_empty() {
        return Ok(Vec::new());
    }
    entry
        .value
        .split(',')
        .map(|part| {
            item(&Entry {
                line: entry.line,
                key: entry.key.clone(),
                value: part.trim().to_string(),
            })
        })
        .collect()
}

fn tokenize(text: &str) -> Result<Entries, ConfigError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: content.to_string(),
        })?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        }
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        }
        if let Some(first) = entries.iter().find(|e| e.key == key) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
                first: first.line,
            });
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(Entries(entries))
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let entries = tokenize(text)?;
        let case_entry = entries
            .0
            .iter()
            .find(|e| e.key == "case")
            .ok_or(ConfigError::MissingCase)?;
        let kind: CaseKind = parse_value(case_entry)?;
        let mut config = RunConfig::defaults(kind);
        let mut length_given = false;

        for entry in &entries.0 {
            let p: &mut CaseParams = &mut config.case.params;
            match entry.key.as_str() {
                "case" => {}
                "alpha" => p.alpha = parse_real(entry)?,
                "k" => p.k = parse_real(entry)?,
                "length" => {
                    p.length = parse_real(entry)?;
                    length_given = true;
                }
                "v_max" => p.v_max = parse_real(entry)?,
                "n_p" => p.n_p = parse_real(entry)?,
                "n_b" => p.n_b = parse_real(entry)?,
                "v_b" => p.v_b = parse_real(entry)?,
                "v_t" => p.v_t = parse_real(entry)?,
                "method" => config.method = parse_value(entry)?,
                "nx" => config.nx = parse_value(entry)?,
                "nv" => config.nv = parse_value(entry)?,
                "order" => config.order = parse_value(entry)?,
                "sigma_x" => config.sigma_x = parse_real(entry)?,
                "sigma_v" => config.sigma_v = parse_real(entry)?,
                "mu" => config.mu = parse_real(entry)?,
                "n_box" => config.n_box = parse_value(entry)?,
                "poisson_cells" => config.poisson_cells = parse_value(entry)?,
                "integrator" => config.integrator.scheme = parse_value(entry)?,
                "dt" => config.integrator.dt = parse_real(entry)?,
                "t_end" => config.t_end = parse_real(entry)?,
                "amplitude_grid" => config.amplitude_grid = parse_value(entry)?,
                "snapshot_times" => config.snapshot_times = parse_list(entry, parse_real)?,
                "snapshot_nx" => config.snapshot_nx = parse_value(entry)?,
                "snapshot_nv" => config.snapshot_nv = parse_value(entry)?,
                "snapshot_reference" => config.snapshot_reference = parse_value(entry)?,
                "study_resolutions" => config.study_resolutions = parse_list(entry, parse_value)?,
                "reference_resolution" => config.reference_resolution = parse_value(entry)?,
                "output_dir" => config.output_dir = Some(PathBuf::from(&entry.value)),
                "threads" => config.threads = parse_value(entry)?,
                other => unreachable!("key '{other}' passed the key check"),
            }
        }
        if !length_given {
            config.case.params.length = TAU / config.case.params.k;
        }
        config.validate(&entries)?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        for kind in CaseKind::ALL {
            let config = RunConfig::defaults(kind);
            let text = config.to_config_string();
            let back: RunConfig = text.parse().unwrap();
            assert_eq!(back, config, "{kind}");
        }
    }

    #[test]
    fn presets_round_trip() {
        for kind in CaseKind::ALL {
            for method in [Method::Direct, Method::Piecewise] {
                for preset in [Preset::Paper, Preset::Ci, Preset::Long] {
                    let c = RunConfig::preset(kind, method, preset);
                    assert_eq!(c.method, method);
                    assert!(c.snapshot_times.iter().all(|&t| t <= c.t_end));
                    assert_eq!(c.to_config_string().parse::<RunConfig>().unwrap(), c);
                }
            }
        }
        let direct = RunConfig::preset(CaseKind::WeakLandau, Method::Direct, Preset::Ci);
        assert_eq!(
            (direct.nx, direct.sigma_x, direct.sigma_v, direct.t_end),
            (32, 3.0, 1.0, 35.0)
        );
        assert_eq!(
            direct.integrator,
            IntegratorConfig {
                scheme: Scheme::Rk4,
                dt: 0.125
            }
        );
    }

    #[test]
    fn case_alone_gives_paper_defaults() {
        let c: RunConfig = "case = weak_landau".parse().unwrap();
        assert_eq!(c, RunConfig::defaults(CaseKind::WeakLandau));
        assert_eq!((c.sigma_x, c.sigma_v, c.order, c.integrator.dt), (6.0, 3.0, 2, 0.0625));
        assert_eq!((c.nx, c.nv, c.mu, c.n_box), (512, 512, 1e-5, 200));
    }

    #[test]
    fn overrides_and_comments() {
        let text = "# landau at low resolution\ncase = weak_landau\nnx = 32 # trailing comment\nnv=48\ndt = 1/8\nmethod = direct\nintegrator = rk4\nsnapshot_times = 0, 2.5\nstudy_resolutions = 16x16, 32x32\n";
        let c: RunConfig = text.parse().unwrap();
        assert_eq!((c.nx, c.nv), (32, 48));
        assert_eq!(
            c.integrator,
            IntegratorConfig {
                scheme: Scheme::Rk4,
                dt: 0.125
            }
        );
        assert_eq!(c.method, Method::Direct);
        assert_eq!(c.snapshot_times, vec![0.0, 2.5]);
        assert_eq!(
            c.study_resolutions,
            vec![Resolution::new(16, 16), Resolution::new(32, 32)]
        );
        assert_eq!(c.sigma_x, 6.0);
    }

    #[test]
    fn length_follows_k_unless_given() {
        let c: RunConfig = "case = weak_landau\nk = 0.25".parse().unwrap();
        assert!((c.case.params.length - TAU / 0.25).abs() < 1e-14);
        let c: RunConfig = "case = weak_landau\nk = 0.25\nlength = 3".parse().unwrap();
        assert_eq!(c.case.params.length, 3.0);
    }

    #[test]
    fn unknown_key_names_line() {
        let err = "case = two_stream\n\nsigma = 3".parse::<RunConfig>().unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey { line: 3, ref key } if key == "sigma"));
        assert_eq!(err.to_string(), "line 3: unknown key 'sigma'");
    }

    #[test]
    fn negative_mu_is_a_range_error() {
        let err = "case = weak_landau\nmu = -1".parse::<RunConfig>().unwrap_err();
        assert!(matches!(err, ConfigError::OutOfRange { line: Some(2), ref key, .. } if key == "mu"));
        assert!(err.to_string().contains("'mu'"));
    }

    #[test]
    fn other_errors() {
        assert!(matches!("nx = 3".parse::<RunConfig>(), Err(ConfigError::MissingCase)));
        assert!(matches!(
            "case = weak_landau\nnx = 3\nnx = 4".parse::<RunConfig>(),
            Err(ConfigError::DuplicateKey { line: 3, first: 2, .. })
        ));
        assert!(matches!(
            "case = weak_landau\nnx: 3".parse::<RunConfig>(),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            "case = weak_landau\nnx = many".parse::<RunConfig>(),
            Err(ConfigError::InvalidValue { line: 2, .. })
        ));
        assert!(matches!(
            "case = weak_landau\norder = 3".parse::<RunConfig>(),
            Err(ConfigError::OutOfRange { .. })
        ));
        assert!(matches!(
            "case = weak_landau\nmethod = tree".parse::<RunConfig>(),
            Err(ConfigError::InvalidValue { .. })
        ));
    }
}
