//! Syntactic networks from child free-speech transcripts.
//!
//! The crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! * [`ingest`]: CHAT-style transcript parsing, child-utterance extraction and
//!   token normalization.
//! * [`annotation`]: annotated documents (structures, dependency arcs,
//!   decisions) and their validation.
//! * [`criteria`]: advisory flags that help a human annotator apply the
//!   structural criteria. Nothing here decides acceptance.
//! * [`projection`]: head/complement constituency trees to dependency arcs and
//!   back.
//! * [`graph`]: per-corpus syntax graphs, adjacency matrices, components.
//! * [`metrics`]: degree, clustering, path length, Poisson baseline,
//!   small-world test, assortativity and average structure size.
//!
//! File formats, the pipeline, the CLI and the HTTP service live in the
//! `childnet` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod age;
pub mod annotation;
pub mod criteria;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod projection;

pub use age::Age;
pub use annotation::{
    AnnotatedDocument, AnnotatedUtterance, AnnotationDecision, DecisionStatus, DependencyArc,
    Ordno, RejectReason, Structure, Violation,
};
pub use criteria::{AdvisoryFlag, FlagKind, NonAcceptedLexicon};
pub use graph::{AdjacencyMatrix, Component, SyntaxGraph};
pub use ingest::{RawUtterance, TierCode, TierLine, Token, TokenKind, Transcript};
pub use metrics::{MetricsConfig, MetricsReport, PoissonN};
pub use projection::{ArcSet, ConstituencyNode, ConstituencyTree};
