//! Flat `key=value` configuration files with command-line overrides.
//!
//! Lines are `key = value` (whitespace optional); `#` starts a comment.
//! Flags always win over file values.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use sbmtest::properties::{PropertyPair, SizeRegime};

#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key=value", lineno + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    /// Override a key from a flag (flags win over file values).
    pub fn set_override(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn parse_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("config key {key}: bad float {v:?}")),
        }
    }

    pub fn parse_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("config key {key}: bad integer {v:?}")),
        }
    }

    pub fn parse_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .with_context(|| format!("config key {key}: bad integer {v:?}")),
        }
    }

    pub fn parse_list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<T>()
                        .map_err(|e| anyhow!("config key {key}: bad element {tok:?} ({e})"))
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

/// Build a property pair from config keys `pair`, `m`, `m_prime`, `k`,
/// `regime`, `c_k` for a graph of `n` nodes.
pub fn pair_from_config(cfg: &Config, n: usize) -> Result<PropertyPair> {
    let kind = cfg
        .get("pair")
        .ok_or_else(|| anyhow!("missing pair kind: set --pair or config key pair"))?;
    let k = cfg.parse_usize("k", 2)?;
    let c_k = cfg.parse_usize("c_k", 2)?;
    let regime = match cfg.get_or("regime", default_regime(kind)) {
        "even" => SizeRegime::Even,
        "uneven" => SizeRegime::Uneven { c_k },
        other => bail!("unknown regime {other:?} (expected even or uneven)"),
    };
    let pair = match normalize_kind(kind)? {
        "same-community" => {
            let m = cfg.parse_usize("m", 2)?;
            PropertyPair::same_community(m, n, k, regime)
        }
        "group-community" => {
            let m = cfg.parse_usize("m", 0)?;
            let m_prime = cfg.parse_usize("m_prime", 0)?;
            if m == 0 || m_prime == 0 {
                bail!("group-community needs --m and --m-prime");
            }
            PropertyPair::group_community(m, m_prime, n, k, regime)
        }
        "equal-sizes" => PropertyPair::equal_sizes(n, k, c_k),
        _ => unreachable!(),
    };
    pair.map_err(|e| anyhow!("invalid pair: {e}"))
}

pub fn normalize_kind(raw: &str) -> Result<&'static str> {
    match raw.to_ascii_lowercase().replace('_', "-").as_str() {
        "same-community" | "samecommunity" | "same" => Ok("same-community"),
        "group-community" | "groupcommunity" | "group" => Ok("group-community"),
        "equal-sizes" | "equalsizes" | "sizes" => Ok("equal-sizes"),
        other => bail!("unknown pair kind {other:?}"),
    }
}

fn default_regime(kind: &str) -> &'static str {
    match kind.to_ascii_lowercase().replace('_', "-").as_str() {
        "equal-sizes" | "equalsizes" | "sizes" => "uneven",
        _ => "even",
    }
}
