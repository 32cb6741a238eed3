//! Flag and config-file merging. Every option travels as a string keyed by
//! its long flag name; flags override the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use relaycap::precoding::Scheme;

/// A problem with the user's configuration (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

pub const KEYS: &[&str] =
    &["scheme", "n", "m", "rho1-db", "rho2-db", "rhoi-db", "method", "samples", "seed", "threads", "output"];

pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

/// Requested evaluation, before expansion per scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Mc,
    Analytic,
    Upper,
    Lower,
    LargeN,
    Quadrature,
}

impl MethodChoice {
    fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "mc" => Self::Mc,
            "analytic" => Self::Analytic,
            "upper" => Self::Upper,
            "lower" => Self::Lower,
            "largen" => Self::LargeN,
            "quadrature" => Self::Quadrature,
            other => {
                return Err(config_err(format!(
                    "unknown method '{other}' (expected mc, analytic, upper, lower, largen or quadrature)"
                )))
            }
        })
    }
}

/// Raw `key = value` pairs.
#[derive(Debug, Default, Clone)]
pub struct RawSettings(BTreeMap<String, String>);

fn normalise_key(k: &str) -> String {
    k.trim().to_ascii_lowercase().replace('_', "-")
}

impl RawSettings {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| config_err(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut out = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(format!("line {}: expected 'key = value'", no + 1)))?;
            let k = normalise_key(k);
            if !KEYS.contains(&k.as_str()) {
                return Err(config_err(format!("line {}: unknown key '{k}'", no + 1)));
            }
            out.insert(k, v.trim().to_string());
        }
        Ok(Self(out))
    }

    /// Overlay `(key, value)` pairs given on the command line.
    pub fn overlay<'a>(mut self, flags: impl IntoIterator<Item = (&'a str, Option<String>)>) -> Self {
        for (k, v) in flags {
            if let Some(v) = v {
                self.0.insert(k.to_string(), v);
            }
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse_num<T: std::str::FromStr>(&self, key: &str) -> anyhow::Result<Option<T>> {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|_| config_err(format!("--{key}: cannot parse '{v}'"))))
            .transpose()
    }
}

/// Parse one number, a comma list or an inclusive `start:stop:step` range.
pub fn parse_values(key: &str, text: &str) -> anyhow::Result<Vec<f64>> {
    let num = |s: &str| -> anyhow::Result<f64> {
        let v: f64 = s.trim().parse().map_err(|_| config_err(format!("--{key}: cannot parse '{}'", s.trim())))?;
        if !v.is_finite() {
            return Err(config_err(format!("--{key}: values must be finite")));
        }
        Ok(v)
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) {
                return Err(config_err(format!("--{key}: step must be positive")));
            }
            if stop < start {
                return Err(config_err(format!("--{key}: empty range {start}:{stop}")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        [_] => text.split(',').map(num).collect(),
        _ => Err(config_err(format!("--{key}: expected a value, a list or start:stop:step"))),
    }
}

fn parse_counts(key: &str, text: &str) -> anyhow::Result<Vec<usize>> {
    parse_values(key, text)?
        .into_iter()
        .map(|v| {
            if v >= 0.0 && v == v.round() {
                Ok(v as usize)
            } else {
                Err(config_err(format!("--{key}: expected non-negative integers, got {v}")))
            }
        })
        .collect()
}

/// Fully resolved options shared by `eval` and `sweep`.
#[derive(Debug, Clone)]
pub struct Settings {
    pub schemes: Vec<Scheme>,
    pub methods: Vec<MethodChoice>,
    pub n: Vec<usize>,
    pub rho1_db: Vec<f64>,
    /// `None` ties ρ2 to ρ1.
    pub rho2_db: Option<f64>,
    /// One entry per interference profile.
    pub rhoi_db: Vec<Vec<f64>>,
    pub samples: u64,
    pub seed: u64,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(raw: &RawSettings) -> anyhow::Result<Self> {
        let schemes = raw
            .get("scheme")
            .ok_or_else(|| config_err("--scheme is required"))?
            .split(',')
            .map(|s| s.trim().parse::<Scheme>().map_err(|e| config_err(e.to_string())))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let methods = raw
            .get("method")
            .unwrap_or("mc")
            .split(',')
            .map(|s| MethodChoice::parse(s.trim()))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let n = parse_counts("n", raw.get("n").ok_or_else(|| config_err("--n is required"))?)?;
        if n.contains(&0) {
            return Err(config_err("--n must be at least 1"));
        }
        let rho1_db = parse_values("rho1-db", raw.get("rho1-db").ok_or_else(|| config_err("--rho1-db is required"))?)?;
        let rho2_db = match raw.get("rho2-db") {
            None => None,
            Some(v) => match parse_values("rho2-db", v)?.as_slice() {
                [x] => Some(*x),
                _ => return Err(config_err("--rho2-db takes a single value")),
            },
        };
        let m: Option<usize> = raw.parse_num("m")?;
        let rhoi_db = resolve_profiles(raw.get("rhoi-db"), m)?;
        let samples = raw.parse_num("samples")?.unwrap_or(DEFAULT_SAMPLES);
        let seed = raw.parse_num("seed")?.unwrap_or(DEFAULT_SEED);
        let threads: Option<usize> = raw.parse_num("threads")?;
        if threads == Some(0) {
            return Err(config_err("--threads must be at least 1"));
        }
        Ok(Self {
            schemes,
            methods,
            n,
            rho1_db,
            rho2_db,
            rhoi_db,
            samples,
            seed,
            threads,
            output: raw.get("output").map(PathBuf::from),
        })
    }
}

/// Profiles are separated by `;`. A single value is replicated `m` times.
fn resolve_profiles(text: Option<&str>, m: Option<usize>) -> anyhow::Result<Vec<Vec<f64>>> {
    let Some(text) = text else {
        return match m {
            None | Some(0) => Ok(vec![Vec::new()]),
            Some(_) => Err(config_err("--rhoi-db is required when --m is positive")),
        };
    };
    let mut out = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let list: Vec<f64> = part
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| config_err(format!("--rhoi-db: cannot parse '{}'", s.trim())))
            })
            .collect::<anyhow::Result<_>>()?;
        let list = match (m, list.len()) {
            (Some(m), 1) => vec![list[0]; m],
            (Some(m), len) if len != m => {
                return Err(config_err(format!("--rhoi-db lists {len} powers but --m is {m}")));
            }
            _ => list,
        };
        out.push(list);
    }
    if out.is_empty() {
        return Err(config_err("--rhoi-db is empty"));
    }
    Ok(out)
}
