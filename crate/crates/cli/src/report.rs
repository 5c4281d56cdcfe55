//! The JSON report every subcommand writes.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub pass: bool,
    pub results: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            seed,
            pass: true,
            results: Map::new(),
        }
    }

    /// Records a named result and folds its verdict into the overall pass.
    pub fn add(&mut self, name: &str, pass: bool, value: impl Serialize) -> Result<()> {
        self.pass &= pass;
        let mut v = serde_json::to_value(value).with_context(|| format!("serializing {name}"))?;
        if let Value::Object(m) = &mut v {
            m.entry("pass").or_insert(Value::Bool(pass));
        }
        self.results.insert(name.to_string(), v);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Writes to `path`, or to standard output without one.
    pub fn emit(&self, path: Option<&Path>) -> Result<()> {
        let text = self.to_json()?;
        match path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
