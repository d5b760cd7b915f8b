use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

pub const ENV_PREFIX: &str = "AQUASUB_";
pub const DEFAULT_BUDGET_MS: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("config line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("invalid value for {key}: {value:?}")]
    InvalidValue { key: String, value: String },
    #[error("missing required setting {0:?}")]
    Missing(&'static str),
    #[error("{key} path does not exist: {}", path.display())]
    MissingPath { key: &'static str, path: PathBuf },
}

/// Service settings from a `key=value` file, overridden by `AQUASUB_<KEY>`
/// environment variables.
///
/// Keys: `listen`, `snapshot`, `model`, `links`, `budget_ms`, `log_level`.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub snapshot: PathBuf,
    pub model: Option<PathBuf>,
    pub links: Option<PathBuf>,
    pub budget_ms: u64,
    pub log_level: String,
}

impl ServiceConfig {
    pub fn new(snapshot: impl Into<PathBuf>) -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            snapshot: snapshot.into(),
            model: None,
            links: None,
            budget_ms: DEFAULT_BUDGET_MS,
            log_level: "info".to_string(),
        }
    }

    pub fn budget(&self) -> Duration {
        Duration::from_millis(self.budget_ms)
    }

    /// Builds a config from optional file text and environment pairs; the
    /// environment wins. Only variables starting with [`ENV_PREFIX`] are read.
    pub fn from_sources(
        file: Option<&str>,
        env: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, ConfigError> {
        let mut settings: Vec<(String, String)> = Vec::new();
        if let Some(text) = file {
            for (i, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
                settings.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        for (k, v) in env {
            if let Some(key) = k.strip_prefix(ENV_PREFIX) {
                settings.push((key.to_ascii_lowercase(), v));
            }
        }

        let mut snapshot = None;
        let mut cfg = Self::new(PathBuf::new());
        for (key, value) in settings {
            let invalid = || ConfigError::InvalidValue { key: key.clone(), value: value.clone() };
            match key.as_str() {
                "listen" => cfg.listen = value.parse().map_err(|_| invalid())?,
                "snapshot" => snapshot = Some(PathBuf::from(&value)),
                "model" => cfg.model = Some(PathBuf::from(&value)),
                "links" => cfg.links = Some(PathBuf::from(&value)),
                "budget_ms" => cfg.budget_ms = value.parse().ok().filter(|&b| b > 0).ok_or_else(invalid)?,
                "log_level" => cfg.log_level = value,
                _ => return Err(ConfigError::UnknownKey(key)),
            }
        }
        cfg.snapshot = snapshot.ok_or(ConfigError::Missing("snapshot"))?;
        Ok(cfg)
    }

    /// Every configured path must exist.
    pub fn check_paths(&self) -> Result<(), ConfigError> {
        let mut paths: Vec<(&'static str, &Path)> = vec![("snapshot", &self.snapshot)];
        paths.extend(self.model.as_deref().map(|p| ("model", p)));
        paths.extend(self.links.as_deref().map(|p| ("links", p)));
        for (key, path) in paths {
            if !path.exists() {
                return Err(ConfigError::MissingPath { key, path: path.to_path_buf() });
            }
        }
        Ok(())
    }
}
