//! DGA annotator XML.
//!
//! The token layer is the classic `DGAdoc/s/tok/{orth,ordno}` layout. Arcs
//! and decisions are an extension:
//!
//! ```xml
//! <DGAdoc corpus="peter07">
//!   <s status="rejected" reason="untranscribed" note="...">
//!     <tok><orth>put</orth><ordno>1</ordno></tok>
//!     ...
//!     <dep dependent="3" head="2"/>
//!     <single ordno="1"/>
//!   </s>
//! </DGAdoc>
//! ```
//!
//! `dep` carries one arc; structures are the weakly connected groups of
//! arcs. `single` marks a size-1 structure. Missing `status` means accepted.

use std::borrow::Cow;
use std::fmt::Write as _;

use childnet_core::annotation::{
    AnnotatedDocument, AnnotatedUtterance, AnnotationDecision, DecisionStatus, DependencyArc,
    Ordno, RejectReason, Structure, Violation,
};
use childnet_core::ingest::Token;
use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DgaError {
    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported encoding {0:?}")]
    Encoding(String),
    #[error("sentence {sentence}: {message}")]
    Sentence { sentence: usize, message: String },
    #[error("document is invalid: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

fn sentence_err(sentence: usize, message: impl Into<String>) -> DgaError {
    DgaError::Sentence {
        sentence,
        message: message.into(),
    }
}

/// Encoding named in the XML declaration, if any.
fn declared_encoding(bytes: &[u8]) -> Option<String> {
    let head = &bytes[..bytes.len().min(200)];
    let head = String::from_utf8_lossy(head);
    let decl = head.strip_prefix('\u{feff}').unwrap_or(&head);
    let decl = decl.trim_start();
    if !decl.starts_with("<?xml") {
        return None;
    }
    let end = decl.find("?>")?;
    let decl = &decl[..end];
    let at = decl.find("encoding")?;
    let rest = decl[at + "encoding".len()..]
        .trim_start()
        .strip_prefix('=')?
        .trim_start();
    let quote = rest.chars().next()?;
    let rest = &rest[1..];
    let close = rest.find(quote)?;
    Some(rest[..close].to_string())
}

fn decode(bytes: &[u8]) -> Result<Cow<'_, str>, DgaError> {
    let enc = declared_encoding(bytes).map(|e| e.to_ascii_lowercase());
    match enc.as_deref() {
        None | Some("utf-8") | Some("utf8") => std::str::from_utf8(bytes)
            .map(|s| Cow::Borrowed(s.strip_prefix('\u{feff}').unwrap_or(s)))
            .map_err(|e| DgaError::Encoding(format!("invalid UTF-8: {e}"))),
        Some("iso-8859-1") | Some("latin1") | Some("latin-1") | Some("iso8859-1") => {
            Ok(Cow::Owned(bytes.iter().map(|&b| b as char).collect()))
        }
        Some(other) => Err(DgaError::Encoding(other.to_string())),
    }
}

fn location(text: &str, offset: usize) -> (usize, usize) {
    let before = &text.as_bytes()[..offset.min(text.len())];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
    (line, column)
}

#[derive(Default)]
struct SentenceBuf {
    status: DecisionStatus,
    reason: Option<RejectReason>,
    note: String,
    tokens: Vec<(u32, String)>,
    arcs: Vec<DependencyArc>,
    singles: Vec<Ordno>,
}

#[derive(Default)]
struct TokBuf {
    orth: Option<String>,
    ordno: Option<String>,
}

#[derive(Clone, Copy, PartialEq)]
enum Field {
    None,
    Orth,
    Ordno,
}

fn attr(e: &BytesStart<'_>, name: &str, sentence: usize) -> Result<Option<String>, DgaError> {
    for a in e.attributes() {
        let a = a.map_err(|err| sentence_err(sentence, format!("bad attribute: {err}")))?;
        if a.key.as_ref() == name.as_bytes() {
            let v = a
                .unescape_value()
                .map_err(|err| sentence_err(sentence, format!("bad attribute value: {err}")))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn number_attr(e: &BytesStart<'_>, name: &str, sentence: usize) -> Result<Ordno, DgaError> {
    let tag = String::from_utf8_lossy(e.name().as_ref()).into_owned();
    let raw = attr(e, name, sentence)?
        .ok_or_else(|| sentence_err(sentence, format!("<{tag}> lacks {name}")))?;
    raw.trim()
        .parse::<u32>()
        .ok()
        .filter(|&n| n > 0)
        .map(Ordno)
        .ok_or_else(|| {
            sentence_err(
                sentence,
                format!("<{tag}> {name}={raw:?} is not a position"),
            )
        })
}

fn open_sentence(e: &BytesStart<'_>, n: usize) -> Result<SentenceBuf, DgaError> {
    let mut s = SentenceBuf::default();
    if let Some(v) = attr(e, "status", n)? {
        s.status = DecisionStatus::parse(&v)
            .ok_or_else(|| sentence_err(n, format!("unknown status {v:?}")))?;
    }
    if let Some(v) = attr(e, "reason", n)? {
        s.reason = Some(
            RejectReason::parse(&v)
                .ok_or_else(|| sentence_err(n, format!("unknown reason {v:?}")))?,
        );
    }
    s.note = attr(e, "note", n)?.unwrap_or_default();
    Ok(s)
}

fn close_sentence(s: SentenceBuf, n: usize) -> Result<AnnotatedUtterance, DgaError> {
    let mut toks = s.tokens;
    toks.sort_by_key(|(o, _)| *o);
    for (i, (o, _)) in toks.iter().enumerate() {
        let expected = i as u32 + 1;
        if *o != expected {
            let msg = if i > 0 && toks[i - 1].0 == *o {
                format!("duplicate ordno {o}")
            } else {
                format!("ordno {expected} missing")
            };
            return Err(sentence_err(n, msg));
        }
    }
    let mut u = AnnotatedUtterance::new(toks.iter().map(|(_, w)| Token::new(w)).collect());
    u.structures = Structure::group(s.arcs, s.singles);
    u.decision = AnnotationDecision {
        status: s.status,
        reason: s.reason,
        note: s.note,
    };
    Ok(u)
}

/// Parses a DGA document. UTF-8 by default; iso-8859-1 when declared.
///
/// Only format-level problems are errors here (ordno gaps and duplicates,
/// bad attributes). Structural checks are left to
/// [`AnnotatedDocument::validate`].
pub fn read_dga_xml(bytes: &[u8]) -> Result<AnnotatedDocument, DgaError> {
    let text = decode(bytes)?;
    let mut reader = Reader::from_str(&text);
    reader.config_mut().trim_text(true);

    let mut doc = AnnotatedDocument::default();
    let mut seen_root = false;
    let mut sentence: Option<SentenceBuf> = None;
    let mut tok: Option<TokBuf> = None;
    let mut field = Field::None;
    let mut n = 0usize;
    let mut depth = 0usize;

    let xml_err = |reader: &Reader<&[u8]>, message: String| {
        let (line, column) = location(&text, reader.error_position() as usize);
        DgaError::Xml {
            line,
            column,
            message,
        }
    };

    loop {
        let ev = reader
            .read_event()
            .map_err(|e| xml_err(&reader, e.to_string()))?;
        let empty = matches!(ev, Event::Empty(_));
        match ev {
            Event::Start(e) | Event::Empty(e) => {
                if !empty {
                    depth += 1;
                }
                let name = e.name();
                match name.as_ref() {
                    b"DGAdoc" => {
                        seen_root = true;
                        if let Some(c) = attr(&e, "corpus", 0)? {
                            doc.corpus_id = c;
                        }
                    }
                    b"s" if sentence.is_none() => {
                        n += 1;
                        let s = open_sentence(&e, n)?;
                        if empty {
                            doc.utterances.push(close_sentence(s, n)?);
                        } else {
                            sentence = Some(s);
                        }
                    }
                    b"tok" if sentence.is_some() && tok.is_none() => {
                        if empty {
                            return Err(sentence_err(n, "empty <tok>"));
                        }
                        tok = Some(TokBuf::default());
                    }
                    b"orth" if tok.is_some() => field = Field::Orth,
                    b"ordno" if tok.is_some() => field = Field::Ordno,
                    b"dep" if sentence.is_some() => {
                        let d = number_attr(&e, "dependent", n)?;
                        let h = number_attr(&e, "head", n)?;
                        sentence.as_mut().unwrap().arcs.push(DependencyArc {
                            dependent: d,
                            head: h,
                        });
                    }
                    b"single" if sentence.is_some() => {
                        let o = number_attr(&e, "ordno", n)?;
                        sentence.as_mut().unwrap().singles.push(o);
                    }
                    other => {
                        return Err(xml_err(
                            &reader,
                            format!("unexpected <{}>", String::from_utf8_lossy(other)),
                        ))
                    }
                }
                if empty && matches!(name.as_ref(), b"orth" | b"ordno") {
                    field = Field::None;
                }
            }
            Event::Text(t) => {
                let v = t.unescape().map_err(|e| xml_err(&reader, e.to_string()))?;
                match (field, tok.as_mut()) {
                    (Field::Orth, Some(tb)) => tb.orth = Some(v.trim().to_string()),
                    (Field::Ordno, Some(tb)) => tb.ordno = Some(v.trim().to_string()),
                    _ if v.trim().is_empty() => {}
                    _ => return Err(xml_err(&reader, format!("unexpected text {:?}", v.trim()))),
                }
            }
            Event::End(e) => {
                depth = depth.saturating_sub(1);
                match e.name().as_ref() {
                    b"orth" | b"ordno" => field = Field::None,
                    b"tok" => {
                        let tb = tok.take().expect("open tok");
                        let orth = tb
                            .orth
                            .filter(|o| !o.is_empty())
                            .ok_or_else(|| sentence_err(n, "<tok> without <orth>"))?;
                        let raw = tb.ordno.ok_or_else(|| {
                            sentence_err(n, format!("token {orth:?} has no <ordno>"))
                        })?;
                        let o = raw.parse::<u32>().map_err(|_| {
                            sentence_err(n, format!("ordno {raw:?} is not a number"))
                        })?;
                        sentence.as_mut().expect("open s").tokens.push((o, orth));
                    }
                    b"s" => {
                        let s = sentence.take().expect("open s");
                        doc.utterances.push(close_sentence(s, n)?);
                    }
                    _ => {}
                }
            }
            Event::CData(_) => return Err(xml_err(&reader, "unexpected CDATA".into())),
            Event::Eof if depth > 0 => {
                return Err(xml_err(&reader, "unexpected end of document".into()))
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !seen_root {
        return Err(DgaError::Xml {
            line: 1,
            column: 1,
            message: "no DGAdoc element".into(),
        });
    }
    Ok(doc)
}

/// Serializes a valid document as UTF-8 DGA XML.
pub fn write_dga_xml(doc: &AnnotatedDocument) -> Result<Vec<u8>, DgaError> {
    let violations = doc.validate();
    if !violations.is_empty() {
        return Err(DgaError::Invalid(violations));
    }
    Ok(render(doc).into_bytes())
}

fn render(doc: &AnnotatedDocument) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<!DOCTYPE DGAdoc SYSTEM \"dga.dtd\">\n");
    if doc.corpus_id.is_empty() {
        out.push_str("<DGAdoc>\n");
    } else {
        let _ = writeln!(
            out,
            "<DGAdoc corpus=\"{}\">",
            escape(doc.corpus_id.as_str())
        );
    }
    for u in &doc.utterances {
        out.push_str("<s");
        let d = &u.decision;
        if d.status != DecisionStatus::Accepted {
            let _ = write!(out, " status=\"{}\"", d.status.as_str());
        }
        if let Some(r) = d.reason {
            let _ = write!(out, " reason=\"{}\"", r.as_str());
        }
        if !d.note.is_empty() {
            let _ = write!(out, " note=\"{}\"", escape(d.note.as_str()));
        }
        out.push_str(">\n");
        for (i, t) in u.tokens.iter().enumerate() {
            let _ = write!(
                out,
                "<tok>\n       <orth>{}</orth>\n       <ordno>{}</ordno>\n</tok>\n",
                escape(t.surface.as_str()),
                i + 1
            );
        }
        for s in &u.structures {
            if s.arcs.is_empty() {
                for m in &s.members {
                    let _ = writeln!(out, "<single ordno=\"{m}\"/>");
                }
            }
            for a in &s.arcs {
                let _ = writeln!(
                    out,
                    "<dep dependent=\"{}\" head=\"{}\"/>",
                    a.dependent, a.head
                );
            }
        }
        out.push_str("</s>\n");
    }
    out.push_str("</DGAdoc>\n");
    out
}

/// Skeleton for an unannotated corpus: tokens only, everything accepted
/// except utterances with no lexical token, which are pre-rejected as
/// untranscribed.
pub fn skeleton(corpus_id: &str, utterances: Vec<Vec<Token>>) -> AnnotatedDocument {
    let mut doc = AnnotatedDocument::new(corpus_id);
    for tokens in utterances {
        let lexical = tokens.iter().any(Token::is_word);
        let mut u = AnnotatedUtterance::new(tokens);
        if !lexical {
            u.decision = AnnotationDecision::rejected(RejectReason::Untranscribed);
        }
        doc.utterances.push(u);
    }
    doc
}
