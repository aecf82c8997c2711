//! Plain-text lexicon files.
//!
//! ```text
//! # comment
//! [non_accepted]
//! ah
//! hmm
//! [onomatopoeia]
//! moo
//! [context_sensitive]
//! a
//! ```
//!
//! Words may also be separated by whitespace on one line. Entries are
//! case-folded.

use childnet_core::criteria::{LexiconOverlap, NonAcceptedLexicon};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {0}: unknown section {1:?}")]
    UnknownSection(usize, String),
    #[error("line {0}: word outside any section")]
    NoSection(usize),
    #[error("{0}")]
    Overlap(#[from] LexiconOverlap),
}

pub fn parse_lexicon(text: &str) -> Result<NonAcceptedLexicon, LexiconError> {
    let mut lists: [Vec<String>; 3] = Default::default();
    let mut current: Option<usize> = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(match name.trim() {
                "non_accepted" => 0,
                "onomatopoeia" => 1,
                "context_sensitive" => 2,
                other => return Err(LexiconError::UnknownSection(i + 1, other.into())),
            });
            continue;
        }
        let idx = current.ok_or(LexiconError::NoSection(i + 1))?;
        lists[idx].extend(line.split_whitespace().map(str::to_lowercase));
    }
    let [items, ono, ctx] = lists;
    Ok(NonAcceptedLexicon::new(items, ono, ctx)?)
}

/// Renders a lexicon in the format [`parse_lexicon`] reads.
pub fn render_lexicon(lex: &NonAcceptedLexicon) -> String {
    let mut out = String::new();
    for (name, words) in [
        ("non_accepted", lex.items()),
        ("onomatopoeia", lex.onomatopoeia()),
        ("context_sensitive", lex.context_sensitive()),
    ] {
        out.push_str(&format!("[{name}]\n"));
        for w in words {
            out.push_str(w);
            out.push('\n');
        }
    }
    out
}
