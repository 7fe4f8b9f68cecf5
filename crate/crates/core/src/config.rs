//! Run configuration shared by every subcommand.
//!
//! One TOML file, found through `--config` or the `QLAB_CONFIG` environment
//! variable; missing keys take the defaults below. Command-line flags
//! override the file.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lang::{Vocabulary, DEFAULT_ENUMERATION_CAP};
use crate::prob::ExactProb;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "QLAB_CONFIG";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot read config `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("config `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Vocabulary preset for `gen`, `check`, `entail` and `probe`.
    pub vocabulary: String,
    /// Upper bound on enumerated strings or subsets.
    pub cap: u64,
    pub seed: u64,
    pub experiment: ExperimentConfig,
    pub probe: ProbeConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Vocabulary preset for `borel` and `learn`.
    pub vocabulary: String,
    /// `uniform`, `coin:P` or `table:PATH`.
    pub model: String,
    pub target: String,
    pub alpha: ExactProb,
    /// `a..b` (inclusive) or a comma list.
    pub train_lengths: String,
    pub test_length: usize,
    pub horizon: usize,
    /// Prefix length of the clopen part of the standard family.
    pub window: usize,
    pub samples: usize,
    pub sample_length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub endpoint: String,
    pub sizes: String,
    pub scheme: String,
    pub underspecified: bool,
    pub timeout_ms: u64,
    pub retries: u32,
    pub concurrency: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Relative artifact paths are resolved against this directory.
    pub dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            vocabulary: "everyday".into(),
            cap: DEFAULT_ENUMERATION_CAP as u64,
            seed: 0,
            experiment: ExperimentConfig::default(),
            probe: ProbeConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            vocabulary: "logical".into(),
            model: "uniform".into(),
            target: "universal".into(),
            alpha: ExactProb::ratio(1, 4),
            train_lengths: "1..3".into(),
            test_length: 6,
            horizon: 10,
            window: 3,
            samples: 1000,
            sample_length: 20,
        }
    }
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            endpoint: "builtin:oracle".into(),
            sizes: "2..10".into(),
            scheme: "paper_counts".into(),
            underspecified: false,
            timeout_ms: 10_000,
            retries: 2,
            concurrency: 4,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let c: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_string(),
            message: e.message().to_string(),
        })?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    /// The explicit path if given, else `$QLAB_CONFIG` if set, else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, ConfigError> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("serializable config")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.cap == 0 {
            return bad("cap must be positive".into());
        }
        for name in [&self.vocabulary, &self.experiment.vocabulary] {
            if Vocabulary::preset(name).is_none() {
                return bad(format!("unknown vocabulary `{name}` (logical, logical_plus, everyday)"));
            }
        }
        parse_lengths(&self.experiment.train_lengths)?;
        parse_lengths(&self.probe.sizes)?;
        if self.probe.concurrency == 0 {
            return bad("probe.concurrency must be positive".into());
        }
        if self.experiment.window == 0 {
            return bad("experiment.window must be positive".into());
        }
        Ok(())
    }

    pub fn cap(&self) -> u128 {
        self.cap as u128
    }

    pub fn vocabulary(&self) -> Vocabulary {
        Vocabulary::preset(&self.vocabulary).expect("validated vocabulary")
    }

    pub fn experiment_vocabulary(&self) -> Vocabulary {
        Vocabulary::preset(&self.experiment.vocabulary).expect("validated vocabulary")
    }

    /// Resolves an artifact path against `output.dir`.
    pub fn artifact_path(&self, p: &Path) -> PathBuf {
        match &self.output.dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }
}

/// Reads `a..b`, `a..=b` (both inclusive), `a` or `a,b,c`; the result is
/// sorted and nonempty.
pub fn parse_lengths(text: &str) -> Result<Vec<usize>, ConfigError> {
    let bad = || ConfigError::Invalid(format!("cannot read lengths `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let t = text.trim();
    let mut out: Vec<usize> = if let Some((a, b)) = t.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        t.split(',').map(num).collect::<Result<_, _>>()?
    };
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// [`parse_lengths`] for a contiguous range.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, ConfigError> {
    let v = parse_lengths(text)?;
    let (lo, hi) = (v[0], v[v.len() - 1]);
    if hi - lo + 1 != v.len() {
        return Err(ConfigError::Invalid(format!("`{text}` is not a contiguous range")));
    }
    Ok(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        RunConfig::default().validate().unwrap();
        let round = RunConfig::from_toml(&RunConfig::default().to_toml(), "x").unwrap();
        assert_eq!(round, RunConfig::default());
    }

    #[test]
    fn partial_file() {
        let c = RunConfig::from_toml("seed = 7\n[experiment]\nalpha = \"1/8\"\n", "x").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.experiment.alpha, ExactProb::ratio(1, 8));
        assert_eq!(c.experiment.window, 3);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("[experiment]\nalpha = \"3/2\"\n", "x").is_err());
        assert!(RunConfig::from_toml("colour = 1\n", "x").is_err());
        let c = RunConfig::from_toml("cap = 0\n", "x").unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::from_toml("vocabulary = \"klingon\"\n", "x").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn lengths() {
        assert_eq!(parse_lengths("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_lengths("1..=3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_lengths("4,2").unwrap(), vec![2, 4]);
        assert!(parse_lengths("3..1").is_err());
        assert_eq!(parse_range("2..10").unwrap(), 2..=10);
        assert!(parse_range("2,4").is_err());
    }

    #[test]
    fn artifact_paths() {
        let mut c = RunConfig::default();
        assert_eq!(c.artifact_path(Path::new("a.json")), PathBuf::from("a.json"));
        c.output.dir = Some("out".into());
        assert_eq!(c.artifact_path(Path::new("a.json")), PathBuf::from("out/a.json"));
    }
}
