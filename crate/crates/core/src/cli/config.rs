//! Run configuration: flat `key = value` files overridden by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::data::LabelColumn;
use crate::error::{Error, Result};
use crate::eval::{KernelChoice, Method, Protocol};
use crate::neighbors::K_GRID;
use crate::svm::SolverConfig;

/// Keys accepted in config files; the same names are used as long flags.
pub const KEYS: &[&str] = &[
    "alpha",
    "c-grid",
    "champion",
    "data",
    "dump-memberships",
    "folds",
    "gamma",
    "header",
    "inner-folds",
    "ir-threshold",
    "k-grid",
    "kernel",
    "label-col",
    "method",
    "minority-label",
    "model",
    "normalize",
    "out-dir",
    "reps",
    "report",
    "seed",
    "tol",
];

/// Raw settings in key order.
pub type Settings = BTreeMap<String, String>;

/// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
pub fn parse_settings(text: &str) -> Result<Settings> {
    let mut out = Settings::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("line {}: unknown key {key:?}", lineno + 1)));
        }
        out.insert(key.to_string(), value.trim().to_string());
    }
    Ok(out)
}

pub fn read_settings(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_settings(&text)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Empty means "command default".
    pub methods: Vec<Method>,
    pub kernel: KernelChoice,
    pub c_grid: Vec<f64>,
    pub k_grid: Vec<usize>,
    pub folds: usize,
    pub inner_folds: usize,
    pub reps: usize,
    pub seed: u64,
    pub ir_threshold: f64,
    pub normalize: bool,
    pub header: bool,
    pub data: Vec<PathBuf>,
    pub label_col: Option<LabelColumn>,
    pub minority_label: Option<String>,
    pub out_dir: PathBuf,
    pub dump_memberships: bool,
    pub tol: f64,
    pub alpha: f64,
    pub champion: Method,
    pub model: Option<PathBuf>,
    pub reports: Vec<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let proto = Protocol::default();
        RunConfig {
            methods: Vec::new(),
            kernel: proto.kernel,
            c_grid: proto.c_grid,
            k_grid: K_GRID.to_vec(),
            folds: 5,
            inner_folds: 5,
            reps: 20,
            seed: 0,
            ir_threshold: 3.3,
            normalize: true,
            header: true,
            data: Vec::new(),
            label_col: None,
            minority_label: None,
            out_dir: PathBuf::from("."),
            dump_memberships: false,
            tol: SolverConfig::default().tol,
            alpha: 0.05,
            champion: Method::Iefsvm,
            model: None,
            reports: Vec::new(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected a boolean, got {v:?}"))),
    }
}

/// Accepts plain reals and powers written `2^e`.
fn parse_real(key: &str, token: &str) -> Result<f64> {
    let t = token.trim();
    if let Some((base, exp)) = t.split_once('^') {
        let base: f64 = parse_num(key, base)?;
        let exp: i32 = parse_num(key, exp)?;
        return Ok(base.powi(exp));
    }
    parse_num(key, t)
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut gamma: Option<f64> = None;
        let mut kernel = "rbf".to_string();
        for (key, value) in settings {
            let v = value.as_str();
            match key.as_str() {
                "alpha" => cfg.alpha = parse_real(key, v)?,
                "c-grid" => cfg.c_grid = list(v).map(|t| parse_real(key, t)).collect::<Result<_>>()?,
                "champion" => cfg.champion = v.parse()?,
                "data" => cfg.data = list(v).map(PathBuf::from).collect(),
                "dump-memberships" => cfg.dump_memberships = parse_bool(key, v)?,
                "folds" => cfg.folds = parse_num(key, v)?,
                "gamma" => {
                    gamma = match v.trim() {
                        "auto" | "" => None,
                        other => Some(parse_real(key, other)?),
                    }
                }
                "header" => cfg.header = parse_bool(key, v)?,
                "inner-folds" => cfg.inner_folds = parse_num(key, v)?,
                "ir-threshold" => cfg.ir_threshold = parse_real(key, v)?,
                "k-grid" => cfg.k_grid = list(v).map(|t| parse_num(key, t)).collect::<Result<_>>()?,
                "kernel" => kernel = v.trim().to_ascii_lowercase(),
                "label-col" => cfg.label_col = Some(v.parse().expect("infallible")),
                "method" => cfg.methods = list(v).map(str::parse).collect::<Result<_>>()?,
                "minority-label" => cfg.minority_label = Some(v.trim().to_string()),
                "model" => cfg.model = Some(PathBuf::from(v.trim())),
                "normalize" => cfg.normalize = parse_bool(key, v)?,
                "out-dir" => cfg.out_dir = PathBuf::from(v.trim()),
                "reps" => cfg.reps = parse_num(key, v)?,
                "report" => cfg.reports = list(v).map(PathBuf::from).collect(),
                "seed" => cfg.seed = parse_num(key, v)?,
                "tol" => cfg.tol = parse_real(key, v)?,
                other => return Err(Error::Config(format!("unknown key {other:?}"))),
            }
        }
        cfg.kernel = match kernel.as_str() {
            "linear" => {
                if gamma.is_some() {
                    return Err(Error::Config("gamma only applies to the rbf kernel".into()));
                }
                KernelChoice::Linear
            }
            "rbf" => KernelChoice::Rbf { gamma },
            other => return Err(Error::Config(format!("kernel must be linear or rbf, got {other:?}"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config("alpha must lie in (0, 1)".into()));
        }
        let mut dedup = self.methods.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != self.methods.len() {
            return Err(Error::Config("method list has duplicates".into()));
        }
        self.protocol().validate()
    }

    /// Canonical settings: every key with its effective value.
    pub fn to_settings(&self) -> Settings {
        let mut s = Settings::new();
        let mut put = |k: &str, v: String| {
            s.insert(k.to_string(), v);
        };
        put("alpha", self.alpha.to_string());
        put("c-grid", join(&self.c_grid));
        put("champion", self.champion.to_string());
        put("data", join(&self.data.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()));
        put("dump-memberships", self.dump_memberships.to_string());
        put("folds", self.folds.to_string());
        match self.kernel {
            KernelChoice::Linear => put("kernel", "linear".into()),
            KernelChoice::Rbf { gamma } => {
                put("kernel", "rbf".into());
                put("gamma", gamma.map_or_else(|| "auto".to_string(), |g| g.to_string()));
            }
        }
        put("header", self.header.to_string());
        put("inner-folds", self.inner_folds.to_string());
        put("ir-threshold", self.ir_threshold.to_string());
        put("k-grid", join(&self.k_grid));
        if let Some(col) = &self.label_col {
            put(
                "label-col",
                match col {
                    LabelColumn::Name(n) => n.clone(),
                    LabelColumn::Index(i) => i.to_string(),
                },
            );
        }
        put("method", join(&self.methods));
        if let Some(m) = &self.minority_label {
            put("minority-label", m.clone());
        }
        if let Some(m) = &self.model {
            put("model", m.display().to_string());
        }
        put("normalize", self.normalize.to_string());
        put("out-dir", self.out_dir.display().to_string());
        put("reps", self.reps.to_string());
        put("report", join(&self.reports.iter().map(|p| p.display().to_string()).collect::<Vec<_>>()));
        put("seed", self.seed.to_string());
        put("tol", self.tol.to_string());
        s
    }

    /// Canonical `key = value` text, readable by [`parse_settings`].
    pub fn to_config_text(&self) -> String {
        self.to_settings()
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// First 16 hex digits of SHA-256 over the canonical settings, `out-dir` excluded.
    pub fn config_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for (k, v) in self.to_settings() {
            if k == "out-dir" {
                continue;
            }
            hasher.update(k.as_bytes());
            hasher.update(b"=");
            hasher.update(v.as_bytes());
            hasher.update(b"\n");
        }
        let digest = hasher.finalize();
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn protocol(&self) -> Protocol {
        Protocol {
            kernel: self.kernel,
            c_grid: self.c_grid.clone(),
            k_grid: self.k_grid.clone(),
            folds: self.folds,
            inner_folds: self.inner_folds,
            solver: SolverConfig {
                tol: self.tol,
                ..SolverConfig::default()
            },
        }
    }
}
