//! Run configuration: `key=value` files overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::forge::{check_hypotheses, Variant};
use crate::matrix::DEFAULT_WORD_BUDGET;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("bad value for `{key}`: {value}")]
    BadValue { key: String, value: String },
    #[error("missing required `{0}`")]
    Missing(&'static str),
    #[error("rejected: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Io(String),
}

pub const KEYS: [&str; 11] = ["p", "r", "k", "variant", "mode", "cap", "word-budget", "tol", "rng-seed", "out", "seed"];

/// Unresolved settings, as read from a file or from flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings(pub BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            let k = k.trim().replace('_', "-");
            if !KEYS.contains(&k.as_str()) {
                return Err(ConfigError::UnknownKey(k));
            }
            map.insert(k, v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.0.insert(key.to_string(), value.to_string());
    }

    /// `other` wins on every key it sets.
    pub fn overlay(mut self, other: &Settings) -> Self {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
        self
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|_| ConfigError::BadValue {
                    key: key.into(),
                    value: v.clone(),
                })
            })
            .transpose()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub p: u32,
    pub r: u32,
    pub k: u32,
    pub variant: Variant,
    pub mode: Option<String>,
    pub enum_cap: u128,
    pub word_budget: usize,
    pub tol: f64,
    pub rng_seed: u64,
    pub out: PathBuf,
    pub seed_file: Option<PathBuf>,
}

impl RunConfig {
    pub const DEFAULT_CAP: u128 = 20_000_000;
    pub const DEFAULT_TOL: f64 = 1e-9;
    pub const DEFAULT_RNG_SEED: u64 = 0x6b6d73;
    pub const DEFAULT_OUT: &'static str = "kmsq-out";

    pub fn new(p: u32, r: u32, k: u32, variant: Variant) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        s.set("p", p);
        s.set("r", r);
        s.set("k", k);
        s.set("variant", variant);
        Self::from_settings(&s)
    }

    /// Resolves and validates. Without an explicit variant, `k = 1` means
    /// `sp` and anything else `sl`.
    pub fn from_settings(s: &Settings) -> Result<Self, ConfigError> {
        let p = s.get("p")?.ok_or(ConfigError::Missing("p"))?;
        let r = s.get("r")?.unwrap_or(1);
        let k = s.get("k")?.ok_or(ConfigError::Missing("k"))?;
        let variant = match s.0.get("variant") {
            Some(v) => Variant::parse(v).ok_or_else(|| ConfigError::BadValue {
                key: "variant".into(),
                value: v.clone(),
            })?,
            None if k == 1 => Variant::Symplectic,
            None => Variant::SpecialLinear,
        };
        let tol: f64 = s.get("tol")?.unwrap_or(Self::DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(ConfigError::BadValue {
                key: "tol".into(),
                value: tol.to_string(),
            });
        }
        let rng_seed = match s.0.get("rng-seed") {
            Some(v) => parse_u64(v).ok_or_else(|| ConfigError::BadValue {
                key: "rng-seed".into(),
                value: v.clone(),
            })?,
            None => Self::DEFAULT_RNG_SEED,
        };
        let cfg = Self {
            p,
            r,
            k,
            variant,
            mode: s.0.get("mode").cloned(),
            enum_cap: s.get("cap")?.unwrap_or(Self::DEFAULT_CAP),
            word_budget: s.get("word-budget")?.unwrap_or(DEFAULT_WORD_BUDGET),
            tol,
            rng_seed,
            out: s.0.get("out").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(Self::DEFAULT_OUT)),
            seed_file: s.0.get("seed").map(PathBuf::from),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        check_hypotheses(self.p, self.r, self.k, self.variant).map_err(|e| ConfigError::Hypothesis(e.to_string()))
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.r)
    }

    /// Canonical `key=value` form, as accepted by [`Settings::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "p={}\nr={}\nk={}\nvariant={}\ncap={}\nword-budget={}\ntol={:e}\nrng-seed={}\n",
            self.p, self.r, self.k, self.variant, self.enum_cap, self.word_budget, self.tol, self.rng_seed
        );
        if let Some(m) = &self.mode {
            s.push_str(&format!("mode={m}\n"));
        }
        s
    }
}

fn parse_u64(s: &str) -> Option<u64> {
    match s.strip_prefix("0x") {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}
