//! File formats, corpus pipeline and annotation service built on
//! `childnet-core`.

pub mod config;
pub mod dga;
pub mod export;
pub mod lexicon;
pub mod pipeline;
pub mod series;
pub mod service;
