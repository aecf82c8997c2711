//! Corpus series manifests.
//!
//! ```toml
//! [[corpus]]
//! id = "peter07"
//! transcript = "peter07.cha"
//! annotation = "peter07.xml"   # optional
//! age = "1;9.7"                # optional
//! ```
//!
//! Relative paths resolve against the manifest's directory.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use childnet_core::Age;
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    #[error("manifest: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("corpus id {0:?} appears twice")]
    DuplicateId(String),
    #[error("corpus {id}: bad age {age:?}")]
    BadAge { id: String, age: String },
    #[error("corpus {later} ({later_age}) is listed after the older {earlier} ({earlier_age})")]
    NotChronological {
        earlier: String,
        earlier_age: Age,
        later: String,
        later_age: Age,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesEntry {
    pub corpus_id: String,
    pub transcript: PathBuf,
    pub annotation: Option<PathBuf>,
    pub age: Option<Age>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusSeries {
    pub entries: Vec<SeriesEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    corpus: Vec<RawEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    id: String,
    transcript: PathBuf,
    annotation: Option<PathBuf>,
    age: Option<String>,
}

impl CorpusSeries {
    pub fn parse(text: &str, base: &Path) -> Result<CorpusSeries, SeriesError> {
        let m: Manifest = toml::from_str(text)?;
        let mut entries = Vec::with_capacity(m.corpus.len());
        for e in m.corpus {
            let age = match e.age {
                Some(a) => Some(a.parse::<Age>().map_err(|_| SeriesError::BadAge {
                    id: e.id.clone(),
                    age: a,
                })?),
                None => None,
            };
            entries.push(SeriesEntry {
                transcript: base.join(&e.transcript),
                annotation: e.annotation.map(|p| base.join(p)),
                corpus_id: e.id,
                age,
            });
        }
        let series = CorpusSeries { entries };
        series.check()?;
        Ok(series)
    }

    pub fn load(path: &Path) -> Result<CorpusSeries, SeriesError> {
        let text = std::fs::read_to_string(path).map_err(|error| SeriesError::Io {
            path: path.into(),
            error,
        })?;
        CorpusSeries::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Unique ids; ages, where given, never decrease.
    pub fn check(&self) -> Result<(), SeriesError> {
        let mut ids = BTreeSet::new();
        let mut last: Option<(&str, Age)> = None;
        for e in &self.entries {
            if !ids.insert(e.corpus_id.as_str()) {
                return Err(SeriesError::DuplicateId(e.corpus_id.clone()));
            }
            if let Some(age) = e.age {
                if let Some((id, prev)) = last {
                    if age < prev {
                        return Err(SeriesError::NotChronological {
                            earlier: id.into(),
                            earlier_age: prev,
                            later: e.corpus_id.clone(),
                            later_age: age,
                        });
                    }
                }
                last = Some((&e.corpus_id, age));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let text = r#"
            [[corpus]]
            id = "peter07"
            transcript = "p7.cha"
            annotation = "p7.xml"
            age = "1;9.7"

            [[corpus]]
            id = "peter15"
            transcript = "/abs/p15.cha"
            age = "2;3.21"
        "#;
        let s = CorpusSeries::parse(text, Path::new("/data")).unwrap();
        assert_eq!(s.entries.len(), 2);
        assert_eq!(s.entries[0].transcript, PathBuf::from("/data/p7.cha"));
        assert_eq!(s.entries[0].annotation, Some(PathBuf::from("/data/p7.xml")));
        assert_eq!(s.entries[0].age, Some(Age::new(1, 9, 7)));
        assert_eq!(s.entries[1].transcript, PathBuf::from("/abs/p15.cha"));
        assert_eq!(s.entries[1].annotation, None);
        assert_eq!(s.entries[1].age, Some(Age::new(2, 3, 21)));
    }

    #[test]
    fn empty_manifest() {
        assert!(CorpusSeries::parse("", Path::new("."))
            .unwrap()
            .entries
            .is_empty());
    }

    #[test]
    fn rejects_duplicates_and_disorder() {
        let dup = "[[corpus]]\nid='a'\ntranscript='a'\n[[corpus]]\nid='a'\ntranscript='b'\n";
        assert!(matches!(
            CorpusSeries::parse(dup, Path::new(".")),
            Err(SeriesError::DuplicateId(_))
        ));
        let order = "[[corpus]]\nid='a'\ntranscript='a'\nage='2;0'\n[[corpus]]\nid='b'\ntranscript='b'\nage='1;11'\n";
        assert!(matches!(
            CorpusSeries::parse(order, Path::new(".")),
            Err(SeriesError::NotChronological { .. })
        ));
        let bad = "[[corpus]]\nid='a'\ntranscript='a'\nage='two'\n";
        assert!(matches!(
            CorpusSeries::parse(bad, Path::new(".")),
            Err(SeriesError::BadAge { .. })
        ));
    }
}
