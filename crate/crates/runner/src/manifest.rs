//! Run manifests: a flat `key = value` record of what a run did and wrote.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::config::{RunConfig, parse_key_values};
use crate::error::{Result, RunError};

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub workers: usize,
    pub duration_secs: f64,
    pub config: RunConfig,
    /// `(label, file name)`; file names are relative to `config.output_dir`.
    pub outputs: Vec<(String, PathBuf)>,
}

impl RunManifest {
    /// Absolute-or-relative path of every output file.
    pub fn output_paths(&self) -> impl Iterator<Item = PathBuf> + '_ {
        self.outputs.iter().map(|(_, f)| self.config.output_dir.join(f))
    }

    pub fn file_name(command: &str) -> String {
        format!("manifest_{command}.txt")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "workers = {}", self.workers);
        let _ = writeln!(s, "duration_secs = {:.3}", self.duration_secs);
        for line in self.config.to_key_values().lines() {
            let _ = writeln!(s, "config.{line}");
        }
        for (label, file) in &self.outputs {
            let _ = writeln!(s, "output.{label} = {}", file.display());
        }
        s
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let kv = parse_key_values(text)?;
        let get = |k: &str| kv.get(k).cloned().ok_or_else(|| RunError::format(path, format!("missing `{k}`")));
        let num = |k: &str| -> Result<String> { get(k) };
        let mut config = RunConfig { workers: None, ..RunConfig::default() };
        let mut outputs = Vec::new();
        // Output order follows the file, not the sorted key map.
        for line in text.lines() {
            if let Some((k, v)) = line.split_once('=') {
                if let Some(label) = k.trim().strip_prefix("output.") {
                    outputs.push((label.to_string(), PathBuf::from(v.trim())));
                }
            }
        }
        for (k, v) in &kv {
            if let Some(key) = k.strip_prefix("config.") {
                config.set(key, v)?;
            }
        }
        let bad = |k: &str| RunError::format(path, format!("bad value for `{k}`"));
        Ok(Self {
            command: get("command")?,
            version: get("version")?,
            seed: num("seed")?.parse().map_err(|_| bad("seed"))?,
            workers: num("workers")?.parse().map_err(|_| bad("workers"))?,
            duration_secs: num("duration_secs")?.parse().map_err(|_| bad("duration_secs"))?,
            config,
            outputs,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        Self::parse(path, &text)
    }
}
