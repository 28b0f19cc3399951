//! JSON input formats.
//!
//! A distribution is `{"support": [...], "mass": [...]}`; `support` may be
//! omitted, in which case it defaults to `0, 1, …, n-1`.
//!
//! A Markov system is
//! `{"n_states": n, "rates": [[...], ...], "p0": [...], "tau": τ, "dt": h}`
//! where `rates[n][m]` is the rate of the jump `m → n` (row = destination,
//! column = source). Diagonal entries are ignored and recomputed so that each
//! column sums to zero.

use std::io::Read;

use anyhow::{bail, Context, Result};
use divbound_core::thermo::MarkovSystem;
use divbound_core::DiscreteDist;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistJson {
    #[serde(default)]
    pub support: Option<Vec<f64>>,
    pub mass: Vec<f64>,
}

impl DistJson {
    pub fn from_dist(d: &DiscreteDist) -> Self {
        DistJson {
            support: Some(d.support().to_vec()),
            mass: d.mass().to_vec(),
        }
    }

    pub fn into_dist(self) -> Result<DiscreteDist> {
        let d = match self.support {
            Some(s) => DiscreteDist::new(s, self.mass),
            None => DiscreteDist::from_masses(self.mass),
        };
        d.map_err(|e| anyhow::anyhow!("invalid distribution: {e}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemJson {
    pub n_states: usize,
    pub rates: Vec<Vec<f64>>,
    pub p0: Vec<f64>,
    pub tau: f64,
    pub dt: f64,
}

impl SystemJson {
    pub fn into_system(self) -> Result<MarkovSystem> {
        if self.rates.len() != self.n_states || self.p0.len() != self.n_states {
            bail!("rates and p0 must have n_states = {} rows/entries", self.n_states);
        }
        if let Some(n) = self.rates.iter().position(|r| r.len() != self.n_states) {
            bail!("rates row {n} has {} entries, expected {}", self.rates[n].len(), self.n_states);
        }
        MarkovSystem::from_off_diagonal(self.rates, self.p0, self.tau, self.dt)
            .map_err(|e| anyhow::anyhow!("invalid system: {e}"))
    }
}

/// Reads a flag value: `-` is stdin, a value starting with `{` is inline
/// JSON, anything else is a file path.
pub fn read_source(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))
    }
}

pub fn parse_dist(text: &str) -> Result<DiscreteDist> {
    let raw: DistJson = serde_json::from_str(text).context("malformed distribution JSON")?;
    raw.into_dist()
}

pub fn parse_system(text: &str) -> Result<MarkovSystem> {
    let raw: SystemJson = serde_json::from_str(text).context("malformed system JSON")?;
    raw.into_system()
}
