//! Run configuration: defaults, `key = value` files and flag overrides.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use xxz_core::ensemble::{DEFAULT_SEED, time_grid};
use xxz_core::{ChainParams, EnsembleConfig, HamiltonianVariant};

use crate::error::{Result, RunError};

/// Environment variable selecting the worker count (`1` forces serial).
pub const WORKERS_ENV: &str = "XXZ_WORKERS";

/// Above this many sites the CLI warns about memory and run time.
pub const WARN_SITES: usize = 10;

/// Everything a figure or sweep run needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sites: usize,
    pub coupling: f64,
    pub anisotropy: f64,
    pub lambda: f64,
    pub samples: usize,
    pub seed: u64,
    pub t_max: f64,
    pub dt: f64,
    pub tau: f64,
    pub extensive: bool,
    pub keep_samples: bool,
    pub output_dir: PathBuf,
    pub emit_svg: bool,
    /// `None` uses every available core.
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    /// `L = 8, J = 1, mu = 1.5, lambda = 1`, 100 samples, `t in [0, 100]` at
    /// `dt = 1`, `tau = 20`, extensive measure.
    fn default() -> Self {
        Self {
            sites: 8,
            coupling: 1.0,
            anisotropy: 1.5,
            lambda: 1.0,
            samples: 100,
            seed: DEFAULT_SEED,
            t_max: 100.0,
            dt: 1.0,
            tau: 20.0,
            extensive: true,
            keep_samples: false,
            output_dir: PathBuf::from("out"),
            emit_svg: true,
            workers: None,
        }
    }
}

/// One Hamiltonian of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantSpec {
    pub label: String,
    pub variant: HamiltonianVariant,
    pub lambda: f64,
}

impl VariantSpec {
    pub fn new(label: impl Into<String>, variant: HamiltonianVariant, lambda: f64) -> Self {
        Self { label: label.into(), variant, lambda }
    }
}

/// Rejects duplicate labels.
pub fn check_labels(variants: &[VariantSpec]) -> Result<()> {
    for (i, v) in variants.iter().enumerate() {
        if variants[..i].iter().any(|w| w.label == v.label) {
            return Err(RunError::Config(format!("duplicate variant label `{}`", v.label)));
        }
    }
    Ok(())
}

const KEYS: &[&str] = &[
    "size", "j", "mu", "lambda", "samples", "seed", "tmax", "dt", "tau", "extensive", "keep_samples", "out",
    "svg", "workers",
];

impl RunConfig {
    /// Chain parameters at the configured `lambda`.
    pub fn chain(&self) -> Result<ChainParams> {
        Ok(ChainParams::new(self.sites, self.coupling, self.anisotropy, self.lambda)?)
    }

    /// Ensemble settings derived from the grid fields.
    pub fn ensemble(&self) -> Result<EnsembleConfig> {
        let cfg = EnsembleConfig {
            num_samples: self.samples,
            seed: self.seed,
            times: time_grid(self.t_max, self.dt)?,
            tau: self.tau,
            use_extensive: self.extensive,
            retain_samples: self.keep_samples,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Worker count: explicit setting, else [`WORKERS_ENV`], else all cores.
    pub fn effective_workers(&self) -> Result<usize> {
        if let Some(w) = self.workers {
            return Ok(w.max(1));
        }
        match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(|w| w.max(1))
                .map_err(|_| RunError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
            Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
        }
    }

    /// Sets one field from its textual `key = value` form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value.parse().map_err(|_| RunError::Config(format!("invalid value `{value}` for `{key}`")))
        }
        fn flag(key: &str, value: &str) -> Result<bool> {
            match value {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(RunError::Config(format!("invalid boolean `{value}` for `{key}`"))),
            }
        }
        match key {
            "size" => self.sites = num(key, value)?,
            "j" => self.coupling = num(key, value)?,
            "mu" => self.anisotropy = num(key, value)?,
            "lambda" => self.lambda = num(key, value)?,
            "samples" => self.samples = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "tmax" => self.t_max = num(key, value)?,
            "dt" => self.dt = num(key, value)?,
            "tau" => self.tau = num(key, value)?,
            "extensive" => self.extensive = flag(key, value)?,
            "keep_samples" => self.keep_samples = flag(key, value)?,
            "out" => self.output_dir = PathBuf::from(value),
            "svg" => self.emit_svg = flag(key, value)?,
            "workers" => self.workers = Some(num(key, value)?),
            _ => return Err(RunError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies every line of a `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_key_values(text)? {
            self.set(&key, &value)?;
        }
        Ok(())
    }

    /// Applies a `key = value` file.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        self.apply_text(&text)
    }

    /// The effective configuration as `key = value` lines, parseable by
    /// [`RunConfig::apply_text`].
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        for key in KEYS {
            let value = match *key {
                "size" => self.sites.to_string(),
                "j" => self.coupling.to_string(),
                "mu" => self.anisotropy.to_string(),
                "lambda" => self.lambda.to_string(),
                "samples" => self.samples.to_string(),
                "seed" => self.seed.to_string(),
                "tmax" => self.t_max.to_string(),
                "dt" => self.dt.to_string(),
                "tau" => self.tau.to_string(),
                "extensive" => self.extensive.to_string(),
                "keep_samples" => self.keep_samples.to_string(),
                "out" => self.output_dir.display().to_string(),
                "svg" => self.emit_svg.to_string(),
                "workers" => match self.workers {
                    Some(w) => w.to_string(),
                    None => continue,
                },
                _ => unreachable!(),
            };
            let _ = writeln!(s, "{key} = {value}");
        }
        s
    }
}

/// Splits `key = value` lines, skipping blanks and `#` comments.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| RunError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
        out.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_setup() {
        let cfg = RunConfig::default();
        assert_eq!(cfg.chain().unwrap(), ChainParams::reference());
        let ens = cfg.ensemble().unwrap();
        assert_eq!(ens.num_samples, 100);
        assert_eq!(ens.times.len(), 101);
        assert_eq!(ens.tau, 20.0);
    }

    #[test]
    fn file_then_flags() {
        let mut cfg = RunConfig::default();
        cfg.apply_text("# comment\nsize = 6\nmu=1.0  # trailing\n\nsvg = no\n").unwrap();
        assert_eq!((cfg.sites, cfg.anisotropy, cfg.emit_svg), (6, 1.0, false));
        cfg.set("size", "4").unwrap();
        assert_eq!(cfg.sites, 4);
    }

    #[test]
    fn bad_input_is_a_config_error() {
        let mut cfg = RunConfig::default();
        assert!(matches!(cfg.apply_text("size 8"), Err(RunError::Config(_))));
        assert!(matches!(cfg.set("colour", "red"), Err(RunError::Config(_))));
        assert!(matches!(cfg.set("samples", "-3"), Err(RunError::Config(_))));
    }

    #[test]
    fn key_values_round_trip() {
        let mut cfg = RunConfig { workers: Some(3), seed: 99, dt: 0.25, ..RunConfig::default() };
        cfg.output_dir = PathBuf::from("/tmp/x y");
        let mut back = RunConfig::default();
        back.apply_text(&cfg.to_key_values()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let v = vec![
            VariantSpec::new("a", HamiltonianVariant::NearestNeighbor, 0.0),
            VariantSpec::new("a", HamiltonianVariant::Coupled, 1.0),
        ];
        assert!(check_labels(&v).is_err());
    }
}
