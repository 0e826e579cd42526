//! Job description: flat `key = value` settings merged from a config file and
//! the command line, then checked into a [`JobSpec`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sqrtpot::{Channel, PotentialParams};

use crate::error::{CliError, Result};

pub const DEFAULT_CAP: usize = 100_000;

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "a0",
    "a1",
    "a2",
    "a3",
    "a4",
    "mass",
    "dim",
    "ell",
    "n",
    "nr",
    "oracle",
    "constrain_a3",
    "format",
    "out",
    "tol",
    "grid_points",
    "r_min",
    "r_max",
    "cap",
    "chunk_size",
    "chunk",
    "sweep",
];

/// Parameters a sweep may vary.
pub const SWEEPABLE: &[&str] = &["a0", "a1", "a2", "a3", "a4", "mass"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Spectrum,
    Wavefn,
    Validate,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Usage(format!(
                "unknown format '{s}' (expected csv or json)"
            ))),
        }
    }
}

/// Raw settings; repeated keys accumulate, single-valued keys use the last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, Vec<String>>);

impl Settings {
    pub fn push(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Usage(format!("unknown key '{key}'")));
        }
        self.0
            .entry(key.to_string())
            .or_default()
            .push(value.into());
        Ok(())
    }

    /// `self` with every key present in `overrides` replaced wholesale.
    pub fn overridden_by(mut self, overrides: Settings) -> Settings {
        for (k, v) in overrides.0 {
            self.0.insert(k, v);
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).and_then(|v| v.last()).map(String::as_str)
    }

    pub fn all(&self, key: &str) -> &[String] {
        self.0.get(key).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("cannot parse {key} = '{s}'")))
            })
            .transpose()
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key).map(str::trim) {
            None => Ok(false),
            Some("true" | "1" | "yes" | "on") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(s) => Err(CliError::Usage(format!(
                "{key} must be a boolean, got '{s}'"
            ))),
        }
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Settings> {
    let mut settings = Settings::default();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", i + 1))
        })?;
        settings.push(key.trim(), value.trim())?;
    }
    Ok(settings)
}

pub fn read_config(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

/// Comma-separated items, each a single value or an inclusive range `a..b`.
/// The result is sorted and deduplicated.
pub fn parse_index_list(s: &str) -> Result<Vec<u32>> {
    let bad = || CliError::Usage(format!("invalid index list '{s}'"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
                let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
                if hi < lo {
                    return Err(bad());
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().map_err(|_| bad())?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(CliError::Usage(format!("index list '{s}' is empty")));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    pub key: String,
    pub values: Vec<f64>,
}

/// `key=v1,v2,...` or `key=lo:hi:count` (inclusive, evenly spaced).
pub fn parse_sweep(s: &str) -> Result<SweepAxis> {
    let bad = |why: &str| CliError::Usage(format!("invalid sweep '{s}': {why}"));
    let (key, spec) = s
        .split_once('=')
        .ok_or_else(|| bad("expected key=values"))?;
    let key = key.trim();
    if !SWEEPABLE.contains(&key) {
        return Err(bad("only a0..a4 and mass can be swept"));
    }
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = match spec.split(':').collect::<Vec<_>>()[..] {
        [lo, hi, count] => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            let count: usize = count
                .trim()
                .parse()
                .map_err(|_| bad("count must be an integer"))?;
            match count {
                0 => return Err(bad("count must be positive")),
                1 => vec![lo],
                _ => (0..count)
                    .map(|i| {
                        if i + 1 == count {
                            hi
                        } else {
                            lo + (hi - lo) * i as f64 / (count - 1) as f64
                        }
                    })
                    .collect(),
            }
        }
        [list] => list
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(parse)
            .collect::<Result<_>>()?,
        _ => return Err(bad("expected a list or lo:hi:count")),
    };
    if values.is_empty() {
        return Err(bad("no values"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(SweepAxis {
        key: key.to_string(),
        values,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct GridOverrides {
    pub points: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobSpec {
    pub mode: Mode,
    pub params: PotentialParams,
    /// True when any of a0..a4 was given explicitly.
    pub explicit_params: bool,
    pub dims: Vec<u32>,
    pub ells: Vec<u32>,
    pub ns: Vec<u32>,
    pub oracle: bool,
    /// Replace a3 in every channel by the smallest value that terminates the series.
    pub constrain_a3: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub grid: GridOverrides,
    pub cap: usize,
    pub chunk_size: Option<usize>,
    pub chunk: usize,
    pub sweeps: Vec<SweepAxis>,
}

impl JobSpec {
    pub fn from_settings(mode: Mode, s: &Settings) -> Result<Self> {
        let coeff = |k: &str| -> Result<f64> { Ok(s.parsed(k)?.unwrap_or(0.0)) };
        let params = PotentialParams::new(
            [
                coeff("a0")?,
                coeff("a1")?,
                coeff("a2")?,
                coeff("a3")?,
                coeff("a4")?,
            ],
            s.parsed("mass")?.unwrap_or(1.0),
        )?;
        let ns = match (s.get("n"), s.get("nr")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Usage("give either n or nr, not both".into()))
            }
            (_, Some(nr)) => parse_index_list(nr)?.into_iter().map(|v| 2 * v).collect(),
            (n, None) => parse_index_list(n.unwrap_or("0"))?,
        };
        let tol: Option<f64> = s.parsed("tol")?;
        if tol.is_some_and(|t| t.is_nan() || t < 0.0) {
            return Err(CliError::Usage("tol must be non-negative".into()));
        }
        let grid = GridOverrides {
            points: s.parsed("grid_points")?,
            r_min: s.parsed("r_min")?,
            r_max: s.parsed("r_max")?,
        };
        if let (Some(lo), Some(hi)) = (grid.r_min, grid.r_max) {
            if !(lo > 0.0 && hi > lo) {
                return Err(CliError::Usage(format!(
                    "need 0 < r_min < r_max, got {lo}, {hi}"
                )));
            }
        }
        let sweeps = s
            .all("sweep")
            .iter()
            .map(|v| parse_sweep(v))
            .collect::<Result<Vec<_>>>()?;
        for (i, axis) in sweeps.iter().enumerate() {
            if sweeps[..i].iter().any(|other| other.key == axis.key) {
                return Err(CliError::Usage(format!("{} is swept twice", axis.key)));
            }
        }
        let spec = JobSpec {
            mode,
            params,
            explicit_params: ["a0", "a1", "a2", "a3", "a4"].iter().any(|k| s.contains(k)),
            dims: parse_index_list(s.get("dim").unwrap_or("3"))?,
            ells: parse_index_list(s.get("ell").unwrap_or("0"))?,
            ns,
            oracle: s.flag("oracle")?,
            constrain_a3: s.flag("constrain_a3")?,
            format: s.get("format").unwrap_or("csv").trim().parse()?,
            out: s.get("out").map(PathBuf::from),
            tol,
            grid,
            cap: s.parsed("cap")?.unwrap_or(DEFAULT_CAP),
            chunk_size: s.parsed("chunk_size")?,
            chunk: s.parsed("chunk")?.unwrap_or(0),
            sweeps,
        };
        for &dim in &spec.dims {
            Channel::new(dim, 0, 0)?;
        }
        if spec.chunk_size == Some(0) {
            return Err(CliError::Usage("chunk_size must be positive".into()));
        }
        Ok(spec)
    }

    /// All (D, l, n) channels in lexicographic order.
    pub fn channels(&self) -> Vec<Channel> {
        let mut out = Vec::with_capacity(self.dims.len() * self.ells.len() * self.ns.len());
        for &dim in &self.dims {
            for &ell in &self.ells {
                for &n in &self.ns {
                    out.push(Channel { dim, ell, n });
                }
            }
        }
        out
    }
}
