use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}

/// Defaults read from `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Wall-clock budget per command, in seconds.
    pub time_limit: Option<u64>,
    /// Largest product poset materialized by `poset --tree`.
    pub max_poset_size: Option<u128>,
    /// Largest order complex, in simplices, built for homology.
    pub max_simplices: Option<u128>,
    /// Largest color degree for `closure` and `matching`.
    pub max_degree: Option<usize>,
    /// Truncation bound on total degree for `block-homology`.
    pub max_total: Option<usize>,
    /// Largest candidate set per component for `closure`.
    pub max_candidates: Option<u128>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let config: FileConfig =
            toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), String> {
        let caps = [
            ("threads", self.threads.map(|v| v as u128)),
            ("time_limit", self.time_limit.map(u128::from)),
            ("max_poset_size", self.max_poset_size),
            ("max_simplices", self.max_simplices),
            ("max_degree", self.max_degree.map(|v| v as u128)),
            ("max_total", self.max_total.map(|v| v as u128)),
            ("max_candidates", self.max_candidates),
        ];
        match caps.iter().find(|(_, v)| *v == Some(0)) {
            Some((name, _)) => Err(format!("{name} must be positive")),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("colour = \"red\"").is_err());
        let c: FileConfig = toml::from_str("format = \"csv\"\nmax_total = 6").unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        assert_eq!(c.max_total, Some(6));
    }

    #[test]
    fn rejects_zero_caps() {
        let c: FileConfig = toml::from_str("max_degree = 0").unwrap();
        assert!(c.validate().is_err());
    }
}
