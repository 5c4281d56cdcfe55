//! Optional `key=value` configuration file. Flags override its values.

use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    pub tolerance: Option<f64>,
    pub d: Option<f64>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Blank lines and `#` comments are skipped; keys are `tolerance`, `D`
    /// and `seed`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value", i + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = || format!("line {}: bad value {value:?} for {key}", i + 1);
            match key {
                "tolerance" => cfg.tolerance = Some(value.parse().with_context(bad)?),
                "D" | "d" => cfg.d = Some(value.parse().with_context(bad)?),
                "seed" => cfg.seed = Some(value.parse().with_context(bad)?),
                other => bail!("line {}: unknown key {other:?}", i + 1),
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys() {
        let c = Config::parse("# defaults\ntolerance = 1e-9\nD=2048\n\nseed=7 # trailing\n").unwrap();
        assert_eq!(
            c,
            Config {
                tolerance: Some(1e-9),
                d: Some(2048.0),
                seed: Some(7)
            }
        );
    }

    #[test]
    fn rejects_unknown_and_malformed_lines() {
        assert!(Config::parse("threads=4").is_err());
        assert!(Config::parse("seed").is_err());
        assert!(Config::parse("seed=x").is_err());
    }
}
