//! Flag/file merging and value parsers shared by the subcommands.

use std::ops::RangeInclusive;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mandeldecor::{parse_complex, ComplexValue};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Overlays the flags given on the command line onto the values of a flat
/// TOML config file. Unknown keys in the file are rejected.
pub fn merge<T>(flags: &T, file: Option<&Path>) -> Result<T>
where
    T: Serialize + DeserializeOwned,
{
    let mut table = match file {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            text.parse::<toml::Table>()
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => toml::Table::new(),
    };
    let given = toml::Table::try_from(flags).context("encoding command-line flags")?;
    for (key, value) in given {
        table.insert(key, value);
    }
    let merged = toml::Value::Table(table);
    merged.try_into().map_err(|e: toml::de::Error| anyhow!("invalid config: {}", e.message()))
}

/// Prints the effective configuration to stderr.
pub fn echo<T: Serialize>(command: &str, config: &T) -> Result<()> {
    let text = toml::to_string(config).context("encoding effective config")?;
    eprintln!("# effective config for {command}");
    eprint!("{text}");
    Ok(())
}

pub fn complex(name: &str, text: &str) -> Result<ComplexValue> {
    parse_complex(text).ok_or_else(|| anyhow!("{name}: cannot parse complex number {text:?}"))
}

pub fn require<'a, T>(name: &str, value: &'a Option<T>) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| anyhow!("missing required setting --{}", name.replace('_', "-")))
}

/// `a..b`, `a..=b` or `a-b`, inclusive.
pub fn range(name: &str, text: &str) -> Result<RangeInclusive<usize>> {
    let t = text.trim();
    let (a, b) = t
        .split_once("..=")
        .or_else(|| t.split_once(".."))
        .or_else(|| t.split_once('-'))
        .ok_or_else(|| anyhow!("{name}: expected a range like 5..20, got {text:?}"))?;
    let lo: usize = a.trim().parse().with_context(|| format!("{name}: bad lower bound"))?;
    let hi: usize = b.trim().parse().with_context(|| format!("{name}: bad upper bound"))?;
    if lo > hi {
        bail!("{name}: empty range {text:?}");
    }
    Ok(lo..=hi)
}

/// Comma-separated reals.
pub fn reals(name: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("{name}: bad number {v:?}"))
        })
        .collect()
}

pub fn positive(name: &str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        bail!("{name} must be positive, got {value}")
    }
}
