//! Run configuration: flat `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use pauli_duality_core::dense::DEFAULT_MAX_FULL_SITES;
use pauli_duality_core::{Boundary, DenseBackend, Family};

pub const LMAX_VAR: &str = "PAULI_DUALITY_LMAX";

/// Keys accepted in config files; flags of the same name override them.
pub const KEYS: &[&str] =
    &["family", "L", "N", "J", "B", "J1", "J2", "boundary", "tol", "out", "format", "jobs", "circuit", "generators"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "text" | "txt" => Ok(Format::Text),
            _ => bail!("unknown format {s:?} (csv, json, text)"),
        }
    }
}

/// Raw string values by key, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options(BTreeMap<String, String>);

impl Options {
    pub fn parse_file(text: &str) -> Result<Options> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').with_context(|| format!("config line {}: expected key = value", i + 1))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                bail!("config line {}: unknown key {k:?}", i + 1);
            }
            map.insert(k.to_string(), v.trim().to_string());
        }
        Ok(Options(map))
    }

    pub fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }

    /// `other` wins on conflicts.
    pub fn overridden_by(mut self, other: Options) -> Options {
        self.0.extend(other.0);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(v) = self.get(key) else { return Ok(None) };
        let items = v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("{key}: bad value {s:?}: {e}")))
            .collect::<Result<Vec<T>>>()?;
        if items.is_empty() {
            bail!("{key}: empty list");
        }
        Ok(Some(items))
    }

    fn one<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|s| s.trim().parse::<T>().map_err(|e| anyhow::anyhow!("{key}: bad value {s:?}: {e}")))
            .transpose()
    }
}

/// Typed configuration shared by every command. Grids are non-empty once defaults apply.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub lens: Option<Vec<usize>>,
    pub ns: Option<Vec<usize>>,
    pub js: Option<Vec<f64>>,
    pub bs: Option<Vec<f64>>,
    pub j1s: Option<Vec<f64>>,
    pub j2s: Option<Vec<f64>>,
    pub boundary: Boundary,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub circuit: Option<PathBuf>,
    pub generators: Option<PathBuf>,
    pub backend: DenseBackend,
}

impl RunConfig {
    pub fn from_options(o: &Options, lmax: Option<&str>) -> Result<RunConfig> {
        let boundary = match o.get("boundary").map(str::to_ascii_lowercase).as_deref() {
            None | Some("open") => Boundary::Open,
            Some("periodic") => Boundary::Periodic,
            Some(b) => bail!("boundary: expected open or periodic, got {b:?}"),
        };
        let tol = o.one::<f64>("tol")?;
        if let Some(t) = tol {
            if !(t > 0.0 && t.is_finite()) {
                bail!("tol must be positive, got {t}");
            }
        }
        let jobs = o.one::<usize>("jobs")?.unwrap_or(1);
        if jobs == 0 {
            bail!("jobs must be at least 1");
        }
        let cfg = RunConfig {
            family: o.one::<Family>("family")?,
            lens: o.list("L")?,
            ns: o.list("N")?,
            js: o.list("J")?,
            bs: o.list("B")?,
            j1s: o.list("J1")?,
            j2s: o.list("J2")?,
            boundary,
            tol,
            out: o.get("out").map(PathBuf::from),
            format: o.one::<Format>("format")?.unwrap_or(Format::Csv),
            jobs,
            circuit: o.get("circuit").map(PathBuf::from),
            generators: o.get("generators").map(PathBuf::from),
            backend: backend_from_env(lmax)?,
        };
        for (key, sizes) in [("L", &cfg.lens), ("N", &cfg.ns)] {
            for &s in sizes.iter().flatten() {
                if s == 0 {
                    bail!("{key}: sizes must be positive");
                }
            }
        }
        Ok(cfg)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// `PAULI_DUALITY_LMAX=n` caps state-vector work at `n` sites and full matrices at
/// `min(n, default)`.
pub fn backend_from_env(lmax: Option<&str>) -> Result<DenseBackend> {
    let Some(v) = lmax else { return Ok(DenseBackend::default()) };
    let n: usize = v.trim().parse().with_context(|| format!("{LMAX_VAR}: not a site count: {v:?}"))?;
    if n == 0 || n > 30 {
        bail!("{LMAX_VAR} must be between 1 and 30, got {n}");
    }
    Ok(DenseBackend::with_limits(n.min(DEFAULT_MAX_FULL_SITES), n))
}
