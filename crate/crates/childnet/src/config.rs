//! `key = value` run configuration.
//!
//! ```text
//! strip_chars = .,;:!?<>¿*
//! speaker = *CHI:
//! imitation_window = 3
//! context_window = 3
//! small_world_tol = 0.5
//! poisson_n = gcc        # or: words
//! lexicon = lexicon.txt  # relative to the config file
//! ```

use std::path::{Path, PathBuf};

use childnet_core::criteria::CriteriaConfig;
use childnet_core::ingest::{ExtractOptions, StripSet, TierCode, DEFAULT_STRIP};
use childnet_core::metrics::{MetricsConfig, PoissonN};
use thiserror::Error;

use crate::lexicon::{parse_lexicon, LexiconError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    #[error("line {line}: expected key = value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("lexicon {path}: {error}")]
    Lexicon { path: PathBuf, error: LexiconError },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub strip_chars: String,
    pub speaker: TierCode,
    pub imitation_window: usize,
    pub context_window: usize,
    pub small_world_tol: f64,
    pub poisson_n: PoissonN,
    pub lexicon: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        let extract = ExtractOptions::default();
        let metrics = MetricsConfig::default();
        Config {
            strip_chars: DEFAULT_STRIP.into(),
            speaker: extract.speaker,
            imitation_window: CriteriaConfig::default().imitation_window,
            context_window: extract.context_window,
            small_world_tol: metrics.small_world_tol,
            poisson_n: metrics.poisson_n,
            lexicon: None,
        }
    }
}

impl Config {
    /// Parses config text; relative lexicon paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            // '#' may be a strip character, so only a " #" starts a comment
            let content = match raw.find(" #") {
                Some(at) => &raw[..at],
                None if raw.trim_start().starts_with('#') => "",
                None => raw,
            };
            if content.trim().is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.into(),
                value: value.into(),
            };
            match key {
                "strip_chars" => cfg.strip_chars = value.into(),
                "speaker" => {
                    cfg.speaker = TierCode::parse(value)
                        .filter(TierCode::is_speaker)
                        .ok_or_else(bad)?
                }
                "imitation_window" => cfg.imitation_window = value.parse().map_err(|_| bad())?,
                "context_window" => cfg.context_window = value.parse().map_err(|_| bad())?,
                "small_world_tol" => {
                    cfg.small_world_tol = value
                        .parse()
                        .ok()
                        .filter(|t: &f64| t.is_finite() && *t >= 0.0)
                        .ok_or_else(bad)?
                }
                "poisson_n" => {
                    cfg.poisson_n = match value {
                        "gcc" => PoissonN::Gcc,
                        "words" => PoissonN::Words,
                        _ => return Err(bad()),
                    }
                }
                "lexicon" => cfg.lexicon = Some(base.join(value)),
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.into(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|error| ConfigError::Io {
            path: path.into(),
            error,
        })?;
        Config::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn extract_options(&self) -> ExtractOptions {
        ExtractOptions {
            speaker: self.speaker.clone(),
            strip: StripSet::new(&self.strip_chars),
            context_window: self.context_window,
        }
    }

    pub fn metrics_config(&self) -> MetricsConfig {
        MetricsConfig {
            small_world_tol: self.small_world_tol,
            poisson_n: self.poisson_n,
        }
    }

    /// Reads the lexicon file if one is configured.
    pub fn criteria_config(&self) -> Result<CriteriaConfig, ConfigError> {
        let mut c = CriteriaConfig {
            imitation_window: self.imitation_window,
            ..CriteriaConfig::default()
        };
        if let Some(path) = &self.lexicon {
            let text = std::fs::read_to_string(path).map_err(|error| ConfigError::Io {
                path: path.clone(),
                error,
            })?;
            c.lexicon = parse_lexicon(&text).map_err(|error| ConfigError::Lexicon {
                path: path.clone(),
                error,
            })?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = Config::parse("", Path::new(".")).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.strip_chars, ".,;:!?<>¿*");
        assert_eq!(c.speaker.to_string(), "*CHI:");
        assert_eq!(c.small_world_tol, 0.5);
        assert_eq!(c.poisson_n, PoissonN::Gcc);
    }

    #[test]
    fn all_keys() {
        let text = "# run\nstrip_chars = .,#\nspeaker = *MOT:\nimitation_window = 5 # more\n\
                    context_window=2\nsmall_world_tol = 0.25\npoisson_n = words\nlexicon = lex.txt\n";
        let c = Config::parse(text, Path::new("/data")).unwrap();
        assert_eq!(c.strip_chars, ".,#");
        assert_eq!(c.speaker.to_string(), "*MOT:");
        assert_eq!(c.imitation_window, 5);
        assert_eq!(c.context_window, 2);
        assert_eq!(c.small_world_tol, 0.25);
        assert_eq!(c.poisson_n, PoissonN::Words);
        assert_eq!(c.lexicon, Some(PathBuf::from("/data/lex.txt")));
    }

    #[test]
    fn rejects_bad_input() {
        let p = Path::new(".");
        assert!(matches!(
            Config::parse("speaker", p),
            Err(ConfigError::Syntax { line: 1 })
        ));
        assert!(matches!(
            Config::parse("\ncolour = red", p),
            Err(ConfigError::UnknownKey { line: 2, .. })
        ));
        assert!(matches!(
            Config::parse("speaker = %mor:", p),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            Config::parse("poisson_n = all", p),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            Config::parse("small_world_tol = -1", p),
            Err(ConfigError::BadValue { .. })
        ));
    }
}
