//! Plain-text system definition files.
//!
//! A config names one benchmark system, either built in or a custom VAR
//! process given coefficient by coefficient:
//!
//! ```text
//! # custom VAR(2) on three variables
//! system = var
//! name = demo
//! k = 3
//! order = 2
//! noise = 1.0
//! coef = 1 1 1 0.4      # response source lag value (1-based indices)
//! coef = 2 1 2 -0.35
//! system/seed/c/k are recognized for the built-ins (s1, s2, s3, henon).
//! ```

use std::path::Path;

use ndarray::Array3;

use crate::error::{Error, Result};
use crate::simulate::{System, VarSystemSpec};

/// One parsed `coef` line: 1-based response/source indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefEntry {
    pub response: usize,
    pub source: usize,
    pub lag: usize,
    pub value: f64,
}

/// Parsed but not yet validated system definition.
#[derive(Debug, Clone, Default)]
pub struct SystemConfig {
    pub system: Option<String>,
    pub name: Option<String>,
    pub k: Option<usize>,
    pub order: Option<usize>,
    pub noise: Option<f64>,
    pub c: Option<f64>,
    pub seed: Option<u64>,
    pub coefs: Vec<CoefEntry>,
}

/// Parses `key = value` lines; `#` comments and blank lines are skipped.
/// Unknown or duplicated scalar keys are errors.
pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let mut cfg = SystemConfig::default();
    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(line_no, format!("expected 'key = value', got '{line}'")));
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::parse(line_no, format!("empty value for '{key}'")));
        }
        match key {
            "system" => set_once(&mut cfg.system, value.to_lowercase(), key, line_no)?,
            "name" => set_once(&mut cfg.name, value.to_string(), key, line_no)?,
            "k" => set_once(&mut cfg.k, parse_num(value, key, line_no)?, key, line_no)?,
            "order" => set_once(&mut cfg.order, parse_num(value, key, line_no)?, key, line_no)?,
            "noise" => set_once(&mut cfg.noise, parse_num(value, key, line_no)?, key, line_no)?,
            "c" => set_once(&mut cfg.c, parse_num(value, key, line_no)?, key, line_no)?,
            "seed" => set_once(&mut cfg.seed, parse_num(value, key, line_no)?, key, line_no)?,
            "coef" => cfg.coefs.push(parse_coef(value, line_no)?),
            other => {
                return Err(Error::parse(line_no, format!("unknown key '{other}'")));
            }
        }
    }
    Ok(cfg)
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(Error::parse(line, format!("duplicate key '{key}'")));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str, line: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid value '{value}' for '{key}'")))
}

fn parse_coef(value: &str, line: usize) -> Result<CoefEntry> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 4 {
        return Err(Error::parse(
            line,
            format!("coef needs 'response source lag value', got '{value}'"),
        ));
    }
    let idx = |s: &str, what: &str| -> Result<usize> {
        let v: usize = s
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid {what} '{s}' in coef")))?;
        if v == 0 {
            return Err(Error::parse(line, format!("{what} indices are 1-based")));
        }
        Ok(v)
    };
    Ok(CoefEntry {
        response: idx(parts[0], "response")?,
        source: idx(parts[1], "source")?,
        lag: idx(parts[2], "lag")?,
        value: parts[3]
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid coefficient '{}'", parts[3])))?,
    })
}

impl SystemConfig {
    /// Resolves the parsed definition to a concrete system.
    pub fn build_system(&self) -> Result<System> {
        let kind = self.system.as_deref().unwrap_or("var");
        match kind {
            "s1" => Ok(System::S1),
            "s2" => Ok(System::S2),
            "s3" => Ok(System::S3 {
                seed: self.seed.unwrap_or(1),
            }),
            "henon" | "s4" => {
                let k = self.k.ok_or_else(|| {
                    Error::InvalidInput("henon system needs 'k = <variables>'".into())
                })?;
                Ok(System::Henon {
                    k,
                    c: self.c.unwrap_or(0.3),
                })
            }
            "var" => self.build_var().map(System::Custom),
            other => Err(Error::InvalidInput(format!(
                "unknown system '{other}' (expected s1, s2, s3, henon, or var)"
            ))),
        }
    }

    fn build_var(&self) -> Result<VarSystemSpec> {
        let k = self
            .k
            .ok_or_else(|| Error::InvalidInput("var system needs 'k = <variables>'".into()))?;
        let order = self
            .order
            .ok_or_else(|| Error::InvalidInput("var system needs 'order = <lags>'".into()))?;
        if k == 0 || order == 0 {
            return Err(Error::InvalidInput("k and order must be positive".into()));
        }
        // Reject absurd dimensions before the coefficient array is allocated;
        // the cap is far beyond any simulable system.
        const MAX_COEF_CELLS: usize = 1 << 22;
        if k.checked_mul(k)
            .and_then(|v| v.checked_mul(order))
            .is_none_or(|v| v > MAX_COEF_CELLS)
        {
            return Err(Error::InvalidInput(format!(
                "k = {k} with order = {order} exceeds the supported system size"
            )));
        }
        if self.coefs.is_empty() {
            return Err(Error::InvalidInput(
                "var system needs at least one 'coef' line".into(),
            ));
        }
        let mut a = Array3::zeros((k, k, order));
        for coef in &self.coefs {
            if coef.response > k || coef.source > k {
                return Err(Error::InvalidInput(format!(
                    "coef indices ({}, {}) exceed k = {k}",
                    coef.response, coef.source
                )));
            }
            if coef.lag > order {
                return Err(Error::InvalidInput(format!(
                    "coef lag {} exceeds order {order}",
                    coef.lag
                )));
            }
            let slot = [coef.response - 1, coef.source - 1, coef.lag - 1];
            if a[slot] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "duplicate coef for response {} source {} lag {}",
                    coef.response, coef.source, coef.lag
                )));
            }
            a[slot] = coef.value;
        }
        let noise = self.noise.unwrap_or(1.0);
        if !(noise > 0.0) {
            return Err(Error::InvalidInput("noise must be positive".into()));
        }
        let name = self.name.clone().unwrap_or_else(|| "custom".into());
        VarSystemSpec::new(name, a, vec![noise; k])
    }
}

/// Reads and parses a config file.
pub fn read_config(path: impl AsRef<Path>) -> Result<SystemConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}
