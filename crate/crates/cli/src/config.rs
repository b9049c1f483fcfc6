//! Defaults loaded from a TOML file named by `SPINLOGIC_CONFIG`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_traits::Signed;
use serde::Deserialize;
use spinlogic::{Convention, Scalar, ENUMERATION_CAP};

use crate::Num;

pub const CONFIG_ENV: &str = "SPINLOGIC_CONFIG";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    delta: Option<toml::Value>,
    convention: Option<String>,
    cap: Option<usize>,
    output_dir: Option<PathBuf>,
    verbosity: Option<u8>,
}

#[derive(Debug, Clone)]
pub struct Config {
    /// Used when `--delta` is absent; otherwise each command picks its own.
    pub delta: Option<Num>,
    pub convention: Convention,
    pub cap: usize,
    pub output_dir: Option<PathBuf>,
    pub verbosity: u8,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            delta: None,
            convention: Convention::TwoXMinusOne,
            cap: ENUMERATION_CAP,
            output_dir: None,
            verbosity: 0,
        }
    }
}

impl Config {
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)?;
        let mut cfg = Config::default();
        if let Some(v) = raw.delta {
            let text = match v {
                toml::Value::String(s) => s,
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => bail!("delta must be a number or a string, got {other}"),
            };
            let d = Num::parse_text(&text).with_context(|| format!("bad delta {text:?}"))?;
            if !d.is_positive() {
                bail!("delta must be positive, got {text}");
            }
            cfg.delta = Some(d);
        }
        if let Some(c) = raw.convention {
            cfg.convention = c.parse()?;
        }
        if let Some(cap) = raw.cap {
            if cap > ENUMERATION_CAP {
                bail!("cap {cap} exceeds {ENUMERATION_CAP}");
            }
            cfg.cap = cap;
        }
        cfg.output_dir = raw.output_dir;
        cfg.verbosity = raw.verbosity.unwrap_or(0);
        Ok(cfg)
    }
}
