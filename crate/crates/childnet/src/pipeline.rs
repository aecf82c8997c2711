//! Series runner: transcript and annotation in, graph and report out.

use std::path::{Path, PathBuf};

use childnet_core::annotation::{AnnotatedDocument, Violation};
use childnet_core::graph::{GraphBuilder, SelfLoop, SyntaxGraph};
use childnet_core::ingest::{
    extract_child_utterances, normalize, parse_chat, Diagnostic, ExtractOptions, Transcript,
};
use childnet_core::metrics::{avg_structure_size, report_for_graph, MetricsConfig, MetricsReport};
use childnet_core::Age;
use log::{info, warn};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::Config;
use crate::dga::{read_dga_xml, skeleton, write_dga_xml, DgaError};
use crate::export::{
    edge_list, graph_json, reports_csv, reports_json, utterances_json, UtteranceRecord,
};
use crate::series::{CorpusSeries, SeriesEntry};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {error}")]
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    #[error("{path}: {error}")]
    Dga { path: PathBuf, error: DgaError },
    #[error("{path}: invalid annotation: {}", violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid {
        path: PathBuf,
        violations: Vec<Violation>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CorpusError> {
    std::fs::read(path).map_err(|error| CorpusError::Io {
        path: path.into(),
        error,
    })
}

/// Everything produced for one corpus.
#[derive(Clone, Debug)]
pub struct CorpusOutput {
    pub corpus_id: String,
    pub age: Option<Age>,
    pub utterances: Vec<UtteranceRecord>,
    pub diagnostics: Vec<Diagnostic>,
    /// The annotation the metrics were computed from, or the generated
    /// skeleton when the corpus has none yet.
    pub document: AnnotatedDocument,
    pub annotated: bool,
    pub graph: SyntaxGraph,
    pub self_loops: Vec<SelfLoop>,
    pub report: MetricsReport,
}

/// Settings shared by every corpus of a run.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub extract: ExtractOptions,
    pub metrics: MetricsConfig,
}

impl From<&Config> for RunOptions {
    fn from(c: &Config) -> Self {
        RunOptions {
            extract: c.extract_options(),
            metrics: c.metrics_config(),
        }
    }
}

/// Reads a transcript and tags it with `corpus_id`.
pub fn load_transcript(path: &Path, corpus_id: &str) -> Result<Transcript, CorpusError> {
    let bytes = read(path)?;
    let mut t = parse_chat(&String::from_utf8_lossy(&bytes));
    t.corpus_id = corpus_id.into();
    Ok(t)
}

/// Reads a DGA file and checks it against the annotation invariants.
pub fn load_annotation(path: &Path, corpus_id: &str) -> Result<AnnotatedDocument, CorpusError> {
    let bytes = read(path)?;
    let mut doc = read_dga_xml(&bytes).map_err(|error| CorpusError::Dga {
        path: path.into(),
        error,
    })?;
    let violations = doc.validate();
    if !violations.is_empty() {
        return Err(CorpusError::Invalid {
            path: path.into(),
            violations,
        });
    }
    doc.corpus_id = corpus_id.into();
    Ok(doc)
}

/// The report for a set of documents treated as one corpus. The service
/// preview goes through the same function.
pub fn report_for_documents(
    corpus_id: &str,
    age: Option<Age>,
    docs: &[AnnotatedDocument],
    cfg: &MetricsConfig,
) -> (MetricsReport, SyntaxGraph, Vec<SelfLoop>) {
    let mut b = GraphBuilder::new();
    for d in docs {
        b.add_document(d);
    }
    let (graph, loops) = b.finish();
    let report = report_for_graph(corpus_id, age, &graph, avg_structure_size(docs), cfg);
    (report, graph, loops)
}

pub fn process_corpus(entry: &SeriesEntry, opts: &RunOptions) -> Result<CorpusOutput, CorpusError> {
    let t = load_transcript(&entry.transcript, &entry.corpus_id)?;
    let raw = extract_child_utterances(&t, &opts.extract);
    let utterances: Vec<UtteranceRecord> = raw.iter().map(UtteranceRecord::from).collect();

    let (document, annotated) = match &entry.annotation {
        Some(path) => {
            let doc = load_annotation(path, &entry.corpus_id)?;
            if doc.utterances.len() != raw.len() {
                warn!(
                    "{}: annotation has {} utterances, transcript has {}",
                    entry.corpus_id,
                    doc.utterances.len(),
                    raw.len()
                );
            }
            (doc, true)
        }
        None => {
            info!("{}: no annotation, writing skeleton only", entry.corpus_id);
            (
                skeleton(&entry.corpus_id, raw.iter().map(normalize).collect()),
                false,
            )
        }
    };

    let age = entry.age.or(t.age);
    let (report, graph, self_loops) = report_for_documents(
        &entry.corpus_id,
        age,
        std::slice::from_ref(&document),
        &opts.metrics,
    );
    for l in &self_loops {
        warn!(
            "{}: utterance {}: arc {} -> {} joins two tokens of one word type, dropped",
            l.corpus_id, l.utterance, l.arc.dependent, l.arc.head
        );
    }
    Ok(CorpusOutput {
        corpus_id: entry.corpus_id.clone(),
        age,
        utterances,
        diagnostics: t.diagnostics,
        document,
        annotated,
        graph,
        self_loops,
        report,
    })
}

/// Outcome of a series run, in series order.
#[derive(Debug)]
pub struct RunResult {
    pub outcomes: Vec<(String, Result<CorpusOutput, CorpusError>)>,
}

impl RunResult {
    /// Reports of the corpora that succeeded, in series order.
    pub fn reports(&self) -> Vec<MetricsReport> {
        self.outcomes
            .iter()
            .filter_map(|(_, r)| r.as_ref().ok().map(|o| o.report.clone()))
            .collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &CorpusError)> {
        self.outcomes
            .iter()
            .filter_map(|(id, r)| r.as_ref().err().map(|e| (id.as_str(), e)))
    }

    pub fn is_complete(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Processes every corpus in parallel; a failing corpus does not affect the
/// others.
pub fn run(series: &CorpusSeries, opts: &RunOptions) -> RunResult {
    let outcomes = series
        .entries
        .par_iter()
        .map(|e| (e.corpus_id.clone(), process_corpus(e, opts)))
        .collect();
    RunResult { outcomes }
}

fn write(path: PathBuf, bytes: &[u8]) -> std::io::Result<()> {
    std::fs::write(&path, bytes)
        .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Side outputs of one corpus: `<id>.utterances.json`, `<id>.edges.tsv`,
/// `<id>.graph.json` and, without an annotation, `<id>.skeleton.xml`.
pub fn write_corpus_outputs(out: &CorpusOutput, dir: &Path) -> std::io::Result<()> {
    let id = &out.corpus_id;
    write(
        dir.join(format!("{id}.utterances.json")),
        &utterances_json(&out.utterances),
    )?;
    write(
        dir.join(format!("{id}.edges.tsv")),
        edge_list(&out.graph).as_bytes(),
    )?;
    write(
        dir.join(format!("{id}.graph.json")),
        &graph_json(&out.graph),
    )?;
    if !out.annotated {
        let xml = write_dga_xml(&out.document).map_err(std::io::Error::other)?;
        write(dir.join(format!("{id}.skeleton.xml")), &xml)?;
    }
    Ok(())
}

/// Writes every side output plus `reports.csv` and `reports.json`.
pub fn write_run(result: &RunResult, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (_, r) in &result.outcomes {
        if let Ok(o) = r {
            write_corpus_outputs(o, dir)?;
        }
    }
    let reports = result.reports();
    write(dir.join("reports.csv"), &reports_csv(&reports))?;
    write(dir.join("reports.json"), &reports_json(&reports))?;
    Ok(())
}
