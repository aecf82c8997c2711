//! CHAT-style transcript parsing and child-utterance extraction.
//!
//! Only the parts of CHAT needed to recover the child's main tier are
//! understood: speaker lines (`*CHI:`), dependent tiers (`%mor:`, `%com:`,
//! ...) attached to the most recent speaker line, indented continuation lines
//! and `@` headers. Everything else is reported as a diagnostic.

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::age::Age;

/// Characters replaced by whitespace before splitting a main-tier line.
pub const DEFAULT_STRIP: &str = ".,;:!?<>¿*";

/// Default target speaker.
pub const CHILD_CODE: &str = "*CHI:";

/// Comment text marking a stretch of adult talk that was not transcribed.
pub const UNTRANSCRIBED_MARKER: &str = "untranscribed adult conversation";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TierCode {
    /// Three upper-case letters, e.g. `CHI` for `*CHI:`.
    Speaker(String),
    /// Lower-case tier name, e.g. `mor` for `%mor:`.
    Dependent(String),
}

impl TierCode {
    /// Parses a full code including sigil and colon (`*CHI:` or `%mor:`).
    pub fn parse(code: &str) -> Option<Self> {
        let body = code.strip_suffix(':')?;
        if let Some(name) = body.strip_prefix('*') {
            if name.len() == 3 && name.bytes().all(|b| b.is_ascii_uppercase()) {
                return Some(TierCode::Speaker(name.to_owned()));
            }
        } else if let Some(name) = body.strip_prefix('%') {
            if !name.is_empty() && name.bytes().all(|b| b.is_ascii_lowercase()) {
                return Some(TierCode::Dependent(name.to_owned()));
            }
        }
        None
    }

    pub fn is_speaker(&self) -> bool {
        matches!(self, TierCode::Speaker(_))
    }

    pub fn name(&self) -> &str {
        match self {
            TierCode::Speaker(n) | TierCode::Dependent(n) => n,
        }
    }
}

impl fmt::Display for TierCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TierCode::Speaker(n) => write!(f, "*{n}:"),
            TierCode::Dependent(n) => write!(f, "%{n}:"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TierLine {
    pub code: TierCode,
    pub text: String,
    /// 1-based line number of the first physical line.
    pub line_no: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DiagnosticKind {
    MalformedSpeakerCode,
    MalformedTierCode,
    OrphanDependent,
    OrphanContinuation,
    Unrecognized,
}

/// A recoverable parse problem. The offending line is skipped.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Diagnostic {
    pub line_no: usize,
    pub kind: DiagnosticKind,
    pub line: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            DiagnosticKind::MalformedSpeakerCode => "malformed speaker code",
            DiagnosticKind::MalformedTierCode => "malformed dependent tier code",
            DiagnosticKind::OrphanDependent => "dependent tier without a speaker line",
            DiagnosticKind::OrphanContinuation => "continuation of a skipped line",
            DiagnosticKind::Unrecognized => "unrecognized line",
        };
        write!(f, "line {}: {}: {:?}", self.line_no, what, self.line)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Transcript {
    pub corpus_id: String,
    pub age: Option<Age>,
    /// Speaker and dependent lines in file order.
    pub entries: Vec<TierLine>,
    /// `@` header lines as `(line_no, text)`.
    pub headers: Vec<(usize, String)>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Transcript {
    /// Dependent tiers attached to the speaker line at `entries[index]`.
    pub fn dependents_of(&self, index: usize) -> impl Iterator<Item = &TierLine> {
        self.entries[index + 1..]
            .iter()
            .take_while(|e| !e.code.is_speaker())
    }

    pub fn speaker_lines(&self) -> impl Iterator<Item = (usize, &TierLine)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.code.is_speaker())
    }
}

enum Last {
    Nothing,
    Entry,
    Header,
    Skipped,
}

/// Parses CHAT-style text. Never fails: malformed lines become
/// [`Diagnostic`]s and are skipped.
pub fn parse_chat(text: &str) -> Transcript {
    let mut t = Transcript::default();
    let mut last = Last::Nothing;
    let mut have_speaker = false;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let diag = |kind| Diagnostic {
            line_no,
            kind,
            line: line.to_owned(),
        };

        if line.starts_with([' ', '\t']) {
            let extra = line.trim();
            match last {
                Last::Entry => {
                    let e = t.entries.last_mut().expect("entry present");
                    append(&mut e.text, extra);
                }
                Last::Header => {
                    let h = t.headers.last_mut().expect("header present");
                    append(&mut h.1, extra);
                }
                Last::Nothing | Last::Skipped => {
                    t.diagnostics.push(diag(DiagnosticKind::OrphanContinuation));
                    last = Last::Skipped;
                }
            }
            continue;
        }

        if line.starts_with('@') {
            let header = line.trim_end().to_owned();
            if let Some(rest) = header.strip_prefix("@Age of CHI:") {
                t.age = rest.trim().parse().ok();
            }
            t.headers.push((line_no, header));
            last = Last::Header;
            continue;
        }

        let sigil = line.chars().next();
        if !matches!(sigil, Some('*') | Some('%')) {
            t.diagnostics.push(diag(DiagnosticKind::Unrecognized));
            last = Last::Skipped;
            continue;
        }

        let parsed = line.find(':').and_then(|colon| {
            let code = TierCode::parse(&line[..=colon])?;
            Some((code, line[colon + 1..].trim()))
        });
        match parsed {
            Some((code, rest)) if code.is_speaker() => {
                t.entries.push(TierLine {
                    code,
                    text: rest.to_owned(),
                    line_no,
                });
                have_speaker = true;
                last = Last::Entry;
            }
            Some((code, rest)) => {
                if have_speaker {
                    t.entries.push(TierLine {
                        code,
                        text: rest.to_owned(),
                        line_no,
                    });
                    last = Last::Entry;
                } else {
                    t.diagnostics.push(diag(DiagnosticKind::OrphanDependent));
                    last = Last::Skipped;
                }
            }
            None => {
                let kind = if sigil == Some('*') {
                    // dependents of a broken speaker line must not attach to
                    // the previous speaker
                    have_speaker = false;
                    DiagnosticKind::MalformedSpeakerCode
                } else if have_speaker {
                    DiagnosticKind::MalformedTierCode
                } else {
                    DiagnosticKind::OrphanDependent
                };
                t.diagnostics.push(diag(kind));
                last = Last::Skipped;
            }
        }
    }
    t
}

fn append(text: &mut String, extra: &str) {
    if extra.is_empty() {
        return;
    }
    if !text.is_empty() {
        text.push(' ');
    }
    text.push_str(extra);
}

/// The set of characters removed from main-tier text before tokenization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripSet(Vec<char>);

impl Default for StripSet {
    fn default() -> Self {
        StripSet(DEFAULT_STRIP.chars().collect())
    }
}

impl StripSet {
    pub fn new(chars: &str) -> Self {
        let mut v: Vec<char> = chars.chars().filter(|c| !c.is_whitespace()).collect();
        v.sort_unstable();
        v.dedup();
        StripSet(v)
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn chars(&self) -> &[char] {
        &self.0
    }

    /// Replaces stripped characters by spaces and splits on whitespace.
    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let cleaned: String = text
            .chars()
            .map(|c| if self.contains(c) { ' ' } else { c })
            .collect();
        cleaned
            .split_whitespace()
            .map(ToString::to_string)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum TokenKind {
    Word,
    /// `xxx` or `yyy`.
    Untranscribed,
    /// The CHAT `0` (no speech).
    NullMarker,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Token {
    pub surface: String,
    /// Case-folded surface; this is the word-type identity in graphs.
    pub norm: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn new(surface: &str) -> Self {
        let norm: String = surface
            .chars()
            .filter(|c| !DEFAULT_STRIP.contains(*c))
            .flat_map(char::to_lowercase)
            .collect();
        let kind = match norm.as_str() {
            "xxx" | "yyy" => TokenKind::Untranscribed,
            "0" => TokenKind::NullMarker,
            _ => TokenKind::Word,
        };
        Token {
            surface: surface.to_owned(),
            norm,
            kind,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// Another speaker's main-tier line near a child utterance.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Turn {
    pub speaker: TierCode,
    pub line_no: usize,
    /// Case-folded tokens after stripping.
    pub words: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UtteranceContext {
    /// Up to `window` turns by other speakers before the utterance, oldest first.
    pub preceding: Vec<Turn>,
    /// Up to `window` turns by other speakers after the utterance.
    pub following: Vec<Turn>,
    /// A `%com` announcing untranscribed adult talk sits right before this line.
    pub after_untranscribed_conversation: bool,
    /// Dependent tiers of the utterance itself (`%mor`, `%act`, ...).
    pub dependents: Vec<TierLine>,
}

impl UtteranceContext {
    pub fn dependent(&self, name: &str) -> Option<&str> {
        self.dependents
            .iter()
            .find(|d| d.code.name() == name)
            .map(|d| d.text.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawUtterance {
    pub corpus_id: String,
    pub line_no: usize,
    /// Surface tokens after punctuation stripping.
    pub words: Vec<String>,
    pub context: UtteranceContext,
}

impl RawUtterance {
    /// True for the CHAT `0` line (or a line that stripped to nothing).
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| w == "0")
    }

    /// Tokens joined by single spaces.
    pub fn text(&self) -> String {
        self.words.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractOptions {
    pub speaker: TierCode,
    pub strip: StripSet,
    /// Number of surrounding turns by other speakers kept as context.
    pub context_window: usize,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            speaker: TierCode::parse(CHILD_CODE).expect("valid default code"),
            strip: StripSet::default(),
            context_window: 3,
        }
    }
}

fn mentions_untranscribed(line: &TierLine) -> bool {
    line.code.name() == "com" && line.text.to_lowercase().contains(UNTRANSCRIBED_MARKER)
}

/// Selects the target speaker's main-tier lines in transcript order.
pub fn extract_child_utterances(t: &Transcript, opts: &ExtractOptions) -> Vec<RawUtterance> {
    let speakers: Vec<(usize, &TierLine)> = t.speaker_lines().collect();
    let turn = |line: &TierLine| Turn {
        speaker: line.code.clone(),
        line_no: line.line_no,
        words: opts
            .strip
            .tokenize(&line.text)
            .iter()
            .map(|w| Token::new(w).norm)
            .collect(),
    };

    let mut out = Vec::new();
    for (pos, &(entry_idx, line)) in speakers.iter().enumerate() {
        if line.code != opts.speaker {
            continue;
        }
        let others = |&&(_, l): &&(usize, &TierLine)| l.code != opts.speaker;

        let mut preceding: Vec<Turn> = speakers[..pos]
            .iter()
            .rev()
            .filter(others)
            .take(opts.context_window)
            .map(|(_, l)| turn(l))
            .collect();
        preceding.reverse();
        let following = speakers[pos + 1..]
            .iter()
            .filter(others)
            .take(opts.context_window)
            .map(|(_, l)| turn(l))
            .collect();

        let dependents: Vec<TierLine> = t.dependents_of(entry_idx).cloned().collect();
        let marker_before = pos
            .checked_sub(1)
            .map(|p| t.dependents_of(speakers[p].0).any(mentions_untranscribed))
            .unwrap_or(false);
        let own_marker = dependents
            .iter()
            .any(|d| mentions_untranscribed(d) && d.text.contains("<bef>"));

        out.push(RawUtterance {
            corpus_id: t.corpus_id.clone(),
            line_no: line.line_no,
            words: opts.strip.tokenize(&line.text),
            context: UtteranceContext {
                preceding,
                following,
                after_untranscribed_conversation: marker_before || own_marker,
                dependents,
            },
        });
    }
    out
}

/// Tags each token and case-folds it.
pub fn normalize(u: &RawUtterance) -> Vec<Token> {
    normalize_words(u.words.iter().map(String::as_str))
}

pub fn normalize_words<'a, I>(words: I) -> Vec<Token>
where
    I: IntoIterator<Item = &'a str>,
{
    words.into_iter().map(Token::new).collect()
}
