//! Scenario files: a run plus optional proposals and declared `k`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use kset_core::sim::{distinct_proposals, Trace};
use kset_core::{ProcessId, RunSpec, Value};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    #[serde(flatten)]
    pub run: RunSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proposals: Option<BTreeMap<ProcessId, Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl ScenarioFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let scenario: ScenarioFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing scenario {}", path.display()))?;
        if let Some(proposals) = &scenario.proposals {
            scenario.check_proposals(proposals)?;
        }
        Ok(scenario)
    }

    fn check_proposals(&self, proposals: &BTreeMap<ProcessId, Value>) -> Result<()> {
        let n = self.run.n();
        if let Some(p) = proposals.keys().find(|p| p.index() >= n) {
            bail!("proposal for {p}, but the run has {n} processes");
        }
        if let Some(p) = self.run.processes().find(|p| !proposals.contains_key(p)) {
            bail!("no proposal for {p}");
        }
        Ok(())
    }

    /// Command-line proposals override the file's, which override `p + 1`.
    pub fn proposals(&self, listed: Option<&[Value]>) -> Result<BTreeMap<ProcessId, Value>> {
        match listed {
            Some(values) => {
                if values.len() != self.run.n() {
                    bail!(
                        "{} proposals given for {} processes",
                        values.len(),
                        self.run.n()
                    );
                }
                Ok(values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (ProcessId(i), v))
                    .collect())
            }
            None => Ok(self
                .proposals
                .clone()
                .unwrap_or_else(|| distinct_proposals(self.run.n()))),
        }
    }
}

pub fn read_trace(path: &Path) -> Result<Trace> {
    let text = read_text(path)?;
    serde_json::from_str(&text).with_context(|| format!("parsing trace {}", path.display()))
}

/// Either file kind; traces are recognized by their round records.
pub enum Input {
    Scenario(ScenarioFile),
    Trace(Box<Trace>),
}

impl Input {
    pub fn read(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let value: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if value.get("rounds").is_some() {
            let trace = serde_json::from_value(value)
                .with_context(|| format!("parsing trace {}", path.display()))?;
            Ok(Input::Trace(Box::new(trace)))
        } else {
            let scenario = serde_json::from_value(value)
                .with_context(|| format!("parsing scenario {}", path.display()))?;
            Ok(Input::Scenario(scenario))
        }
    }

    pub fn run(&self) -> &RunSpec {
        match self {
            Input::Scenario(s) => &s.run,
            Input::Trace(t) => &t.run,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Writes `text` to `path`, or to stdout without one.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Traces are large; keep them on one line.
pub fn to_compact_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    Ok(text)
}
