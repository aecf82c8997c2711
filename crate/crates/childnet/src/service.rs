//! Annotation service over a workspace directory of DGA files.
//!
//! Each `<id>.xml` in the directory is one document. A sibling `<id>.cha`,
//! when present, supplies the discourse context used for imitation flags
//! and the child's age.
//!
//! Endpoints (JSON):
//!
//! | method | path                          | body / query            |
//! |--------|-------------------------------|-------------------------|
//! | GET    | `/docs`                       |                         |
//! | GET    | `/docs/{id}`                  |                         |
//! | PUT    | `/docs/{id}/utterances/{n}`   | [`SaveRequest`]         |
//! | GET    | `/metrics?docs=a,b`           |                         |
//!
//! Anything else is served from the static directory, if one is given.
//! Utterance numbers are 1-based.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, put};
use axum::{Json, Router};
use childnet_core::annotation::{AnnotatedDocument, AnnotationDecision, Structure, Violation};
use childnet_core::criteria::{advise, AdvisoryFlag, CriteriaConfig};
use childnet_core::ingest::{extract_child_utterances, ExtractOptions, UtteranceContext};
use childnet_core::metrics::{MetricsConfig, MetricsReport};
use childnet_core::Age;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use tower_http::services::ServeDir;

use crate::dga::{read_dga_xml, write_dga_xml};
use crate::pipeline::{load_transcript, report_for_documents};

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no document {0:?}")]
    NotFound(String),
    #[error("document {id} has no utterance {n}")]
    NoUtterance { id: String, n: usize },
    #[error("document {id} is unreadable: {message}")]
    Unreadable { id: String, message: String },
    #[error("stale revision {given}, current is {current}")]
    Conflict { given: u64, current: u64 },
    #[error("annotation rejected: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    revision: Option<u64>,
    #[serde(skip_serializing_if = "<[Violation]>::is_empty")]
    violations: &'a [Violation],
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let (status, kind) = match &self {
            ServiceError::NotFound(_) | ServiceError::NoUtterance { .. } => {
                (StatusCode::NOT_FOUND, "not_found")
            }
            ServiceError::Unreadable { .. } => (StatusCode::UNPROCESSABLE_ENTITY, "unreadable"),
            ServiceError::Conflict { .. } => (StatusCode::CONFLICT, "conflict"),
            ServiceError::Validation(_) => (StatusCode::UNPROCESSABLE_ENTITY, "validation"),
            ServiceError::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
        };
        let body = ErrorBody {
            error: kind,
            message: self.to_string(),
            revision: match &self {
                ServiceError::Conflict { current, .. } => Some(*current),
                _ => None,
            },
            violations: match &self {
                ServiceError::Validation(v) => v,
                _ => &[],
            },
        };
        (status, Json(body)).into_response()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocSummary {
    pub id: String,
    pub revision: u64,
    pub readable: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub utterances: usize,
    /// Utterances with structures or a non-default decision.
    pub annotated: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtteranceView {
    /// 1-based.
    pub number: usize,
    pub flags: Vec<AdvisoryFlag>,
    pub context: Option<UtteranceContext>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DocumentView {
    pub id: String,
    pub revision: u64,
    pub document: AnnotatedDocument,
    pub utterances: Vec<UtteranceView>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaveRequest {
    pub revision: u64,
    #[serde(default)]
    pub structures: Vec<Structure>,
    #[serde(default)]
    pub decision: AnnotationDecision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaveResponse {
    pub revision: u64,
}

struct Slot {
    revision: u64,
    doc: Result<AnnotatedDocument, String>,
    contexts: Option<Vec<UtteranceContext>>,
    age: Option<Age>,
}

#[derive(Clone, Debug, Default)]
pub struct WorkspaceOptions {
    pub extract: ExtractOptions,
    pub criteria: CriteriaConfig,
    pub metrics: MetricsConfig,
}

/// Documents of one directory with per-document revisions.
pub struct Workspace {
    dir: PathBuf,
    opts: WorkspaceOptions,
    docs: Mutex<BTreeMap<String, Arc<RwLock<Slot>>>>,
}

fn is_annotation_file(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "xml") && !p.to_string_lossy().ends_with(".skeleton.xml")
}

impl Workspace {
    pub fn open(
        dir: impl Into<PathBuf>,
        opts: WorkspaceOptions,
    ) -> Result<Workspace, ServiceError> {
        let ws = Workspace {
            dir: dir.into(),
            opts,
            docs: Mutex::new(BTreeMap::new()),
        };
        ws.rescan()?;
        Ok(ws)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn xml_path(&self, id: &str) -> PathBuf {
        self.dir.join(format!("{id}.xml"))
    }

    fn load_slot(&self, id: &str) -> Slot {
        let doc = std::fs::read(self.xml_path(id))
            .map_err(|e| e.to_string())
            .and_then(|b| read_dga_xml(&b).map_err(|e| e.to_string()))
            .map(|mut d| {
                d.corpus_id = id.into();
                d
            });
        let cha = self.dir.join(format!("{id}.cha"));
        let (contexts, age) = match load_transcript(&cha, id) {
            Ok(t) => {
                let ctx = extract_child_utterances(&t, &self.opts.extract)
                    .into_iter()
                    .map(|u| u.context)
                    .collect();
                (Some(ctx), t.age)
            }
            Err(_) => (None, None),
        };
        Slot {
            revision: 1,
            doc,
            contexts,
            age,
        }
    }

    /// Picks up documents added to the directory since the last scan.
    fn rescan(&self) -> Result<(), ServiceError> {
        let mut ids = Vec::new();
        for entry in std::fs::read_dir(&self.dir)? {
            let p = entry?.path();
            if is_annotation_file(&p) {
                if let Some(stem) = p.file_stem().and_then(|s| s.to_str()) {
                    ids.push(stem.to_string());
                }
            }
        }
        let mut docs = self.docs.lock().expect("workspace lock");
        for id in ids {
            if let Entry::Vacant(e) = docs.entry(id) {
                let slot = self.load_slot(e.key());
                e.insert(Arc::new(RwLock::new(slot)));
            }
        }
        Ok(())
    }

    fn slot(&self, id: &str) -> Result<Arc<RwLock<Slot>>, ServiceError> {
        self.docs
            .lock()
            .expect("workspace lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.into()))
    }

    pub fn list_documents(&self) -> Result<Vec<DocSummary>, ServiceError> {
        self.rescan()?;
        let slots: Vec<(String, Arc<RwLock<Slot>>)> = self
            .docs
            .lock()
            .expect("workspace lock")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Ok(slots
            .into_iter()
            .map(|(id, slot)| {
                let s = slot.read().expect("document lock");
                match &s.doc {
                    Ok(d) => DocSummary {
                        id,
                        revision: s.revision,
                        readable: true,
                        error: None,
                        utterances: d.utterances.len(),
                        annotated: d
                            .utterances
                            .iter()
                            .filter(|u| {
                                !u.structures.is_empty()
                                    || u.decision != AnnotationDecision::default()
                            })
                            .count(),
                    },
                    Err(e) => DocSummary {
                        id,
                        revision: s.revision,
                        readable: false,
                        error: Some(e.clone()),
                        utterances: 0,
                        annotated: 0,
                    },
                }
            })
            .collect())
    }

    pub fn get_document(&self, id: &str) -> Result<DocumentView, ServiceError> {
        let slot = self.slot(id)?;
        let s = slot.read().expect("document lock");
        let doc = s.doc.as_ref().map_err(|e| ServiceError::Unreadable {
            id: id.into(),
            message: e.clone(),
        })?;
        let contexts = s
            .contexts
            .as_ref()
            .filter(|c| c.len() == doc.utterances.len());
        let utterances = doc
            .utterances
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let ctx = contexts.map(|c| &c[i]);
                UtteranceView {
                    number: i + 1,
                    flags: advise(&u.tokens, ctx, &self.opts.criteria),
                    context: ctx.cloned(),
                }
            })
            .collect();
        Ok(DocumentView {
            id: id.into(),
            revision: s.revision,
            document: doc.clone(),
            utterances,
        })
    }

    /// Replaces one utterance's structures and decision, persists the
    /// document and bumps the revision.
    pub fn save_annotation(
        &self,
        id: &str,
        revision: u64,
        number: usize,
        structures: Vec<Structure>,
        decision: AnnotationDecision,
    ) -> Result<u64, ServiceError> {
        let slot = self.slot(id)?;
        let mut s = slot.write().expect("document lock");
        if s.revision != revision {
            return Err(ServiceError::Conflict {
                given: revision,
                current: s.revision,
            });
        }
        let doc = s.doc.as_ref().map_err(|e| ServiceError::Unreadable {
            id: id.into(),
            message: e.clone(),
        })?;
        if number == 0 || number > doc.utterances.len() {
            return Err(ServiceError::NoUtterance {
                id: id.into(),
                n: number,
            });
        }
        let mut next = doc.clone();
        let u = &mut next.utterances[number - 1];
        u.structures = structures;
        u.decision = decision;
        u.canonicalize();
        let violations = u.validate(number);
        if !violations.is_empty() {
            return Err(ServiceError::Validation(violations));
        }
        let bytes = write_dga_xml(&next).map_err(|e| match e {
            crate::dga::DgaError::Invalid(v) => ServiceError::Validation(v),
            other => ServiceError::Io(std::io::Error::other(other)),
        })?;
        persist(&self.xml_path(id), &bytes)?;
        s.doc = Ok(next);
        s.revision += 1;
        Ok(s.revision)
    }

    /// Metrics over the union of the given documents. A single document
    /// yields exactly the pipeline's report for that corpus.
    pub fn preview_metrics(&self, ids: &[String]) -> Result<MetricsReport, ServiceError> {
        let mut docs = Vec::with_capacity(ids.len());
        let mut ages = Vec::new();
        for id in ids {
            let slot = self.slot(id)?;
            let s = slot.read().expect("document lock");
            let d = s.doc.as_ref().map_err(|e| ServiceError::Unreadable {
                id: id.clone(),
                message: e.clone(),
            })?;
            docs.push(d.clone());
            ages.push(s.age);
        }
        let age = match ages.as_slice() {
            [one] => *one,
            _ => None,
        };
        let (report, _, _) = report_for_documents(&ids.join("+"), age, &docs, &self.opts.metrics);
        Ok(report)
    }
}

/// Write to a temporary file in the same directory, then rename over the
/// target.
fn persist(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("xml.tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

#[derive(Deserialize)]
struct MetricsQuery {
    #[serde(default)]
    docs: String,
}

async fn list_handler(
    State(ws): State<Arc<Workspace>>,
) -> Result<Json<Vec<DocSummary>>, ServiceError> {
    Ok(Json(ws.list_documents()?))
}

async fn get_handler(
    State(ws): State<Arc<Workspace>>,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<DocumentView>, ServiceError> {
    Ok(Json(ws.get_document(&id)?))
}

async fn save_handler(
    State(ws): State<Arc<Workspace>>,
    UrlPath((id, n)): UrlPath<(String, usize)>,
    Json(req): Json<SaveRequest>,
) -> Result<Json<SaveResponse>, ServiceError> {
    let revision = ws.save_annotation(&id, req.revision, n, req.structures, req.decision)?;
    Ok(Json(SaveResponse { revision }))
}

async fn metrics_handler(
    State(ws): State<Arc<Workspace>>,
    Query(q): Query<MetricsQuery>,
) -> Result<Json<MetricsReport>, ServiceError> {
    let ids: Vec<String> = q
        .docs
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect();
    Ok(Json(ws.preview_metrics(&ids)?))
}

async fn placeholder() -> Html<&'static str> {
    Html("<!doctype html><title>childnet</title><p>Annotation API: <a href=\"/docs\">/docs</a></p>\n")
}

/// The HTTP API, with `static_dir` (if any) served for every other path.
pub fn router(ws: Arc<Workspace>, static_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/docs", get(list_handler))
        .route("/docs/{id}", get(get_handler))
        .route("/docs/{id}/utterances/{n}", put(save_handler))
        .route("/metrics", get(metrics_handler))
        .with_state(ws);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(placeholder)),
    }
}
