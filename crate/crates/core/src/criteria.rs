//! Advisory flags for the human annotator.
//!
//! Every function here only points at something worth a second look and
//! proposes a treatment. None of them touches an [`AnnotationDecision`];
//! accepting or rejecting stays with the annotator.
//!
//! [`AnnotationDecision`]: crate::annotation::AnnotationDecision

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::annotation::{DependencyArc, Ordno};
use crate::ingest::{Token, UtteranceContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FlagKind {
    NonAcceptedItem,
    Onomatopoeia,
    ImitationCandidate,
    Duplication,
    DiscourseItem,
    SchwaCandidate,
    TaCandidate,
    ListSequence,
    PronounCase,
    MissingCopula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdvisoryFlag {
    pub kind: FlagKind,
    /// Token positions the flag is about; never empty.
    pub span: Vec<Ordno>,
    pub suggestion: String,
    /// Arcs the annotator may apply in one step.
    #[cfg_attr(feature = "serde", serde(default))]
    pub suggested_arcs: Vec<DependencyArc>,
    /// Tokens suggested to stay out of any structure.
    #[cfg_attr(feature = "serde", serde(default))]
    pub exclude: Vec<Ordno>,
}

impl AdvisoryFlag {
    fn new(kind: FlagKind, span: Vec<Ordno>, suggestion: String) -> Self {
        AdvisoryFlag {
            kind,
            span,
            suggestion,
            suggested_arcs: Vec::new(),
            exclude: Vec::new(),
        }
    }
}

const NON_ACCEPTED: &[&str] = &[
    "ah", "awoh", "ay", "hey", "hmm", "huh", "ka", "ma", "mm", "mmhm", "oh", "oop", "oops", "ow",
    "sh", "ssh", "uh", "uhhuh", "uhoh", "um", "whoops", "woo", "yum",
];
const ONOMATOPOEIA: &[&str] = &["choo", "moo", "woof", "bee"];
/// Non-accepted only in some contexts.
const CONTEXT_SENSITIVE: &[&str] = &["a", "an", "s", "ta"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexiconOverlap(pub String);

impl fmt::Display for LexiconOverlap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} appears in more than one lexicon section", self.0)
    }
}

impl core::error::Error for LexiconOverlap {}

/// Items that are not accepted as lexical items, split into plain items,
/// onomatopoeia and context-sensitive items. Entries are case-folded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonAcceptedLexicon {
    items: BTreeSet<String>,
    onomatopoeia: BTreeSet<String>,
    context_sensitive: BTreeSet<String>,
}

impl Default for NonAcceptedLexicon {
    fn default() -> Self {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        NonAcceptedLexicon {
            items: set(NON_ACCEPTED),
            onomatopoeia: set(ONOMATOPOEIA),
            context_sensitive: set(CONTEXT_SENSITIVE),
        }
    }
}

impl NonAcceptedLexicon {
    pub fn new<I, J, K>(
        items: I,
        onomatopoeia: J,
        context_sensitive: K,
    ) -> Result<Self, LexiconOverlap>
    where
        I: IntoIterator<Item = String>,
        J: IntoIterator<Item = String>,
        K: IntoIterator<Item = String>,
    {
        let fold = |xs: &mut dyn Iterator<Item = String>| -> BTreeSet<String> {
            xs.map(|s| Token::new(s.trim()).norm)
                .filter(|s| !s.is_empty())
                .collect()
        };
        let lex = NonAcceptedLexicon {
            items: fold(&mut items.into_iter()),
            onomatopoeia: fold(&mut onomatopoeia.into_iter()),
            context_sensitive: fold(&mut context_sensitive.into_iter()),
        };
        let sets = [&lex.items, &lex.onomatopoeia, &lex.context_sensitive];
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                if let Some(w) = a.intersection(b).next() {
                    return Err(LexiconOverlap(w.clone()));
                }
            }
        }
        Ok(lex)
    }

    pub fn items(&self) -> &BTreeSet<String> {
        &self.items
    }

    pub fn onomatopoeia(&self) -> &BTreeSet<String> {
        &self.onomatopoeia
    }

    pub fn context_sensitive(&self) -> &BTreeSet<String> {
        &self.context_sensitive
    }

    pub fn is_onomatopoeia(&self, norm: &str) -> bool {
        self.onomatopoeia.contains(norm)
    }
}

/// Flags a single word token against the lexicon.
pub fn classify_token(t: &Token, pos: Ordno, lex: &NonAcceptedLexicon) -> Option<AdvisoryFlag> {
    if !t.is_word() {
        return None;
    }
    let w = t.norm.as_str();
    let flag = |kind, text: String| Some(AdvisoryFlag::new(kind, Vec::from([pos]), text));
    if lex.items.contains(w) {
        flag(
            FlagKind::NonAcceptedItem,
            format!("\"{}\" is not accepted as a lexical item", t.surface),
        )
    } else if lex.onomatopoeia.contains(w) {
        flag(
            FlagKind::Onomatopoeia,
            format!("onomatopoeia \"{}\": treat as nonexistent", t.surface),
        )
    } else if lex.context_sensitive.contains(w) {
        match w {
            "a" => flag(
                FlagKind::SchwaCandidate,
                "schwa: decide between a proto-functional particle (determiner, pronoun, \
                 preposition) and a purely phonological filler"
                    .into(),
            ),
            "ta" => flag(
                FlagKind::TaCandidate,
                "\"ta\": may behave as the preposition \"to\" depending on position and context"
                    .into(),
            ),
            _ => flag(
                FlagKind::NonAcceptedItem,
                format!(
                    "\"{}\" is not accepted in some contexts; check context",
                    t.surface
                ),
            ),
        }
    } else {
        None
    }
}

/// Drops onomatopoeia tokens, keeping everything else in order.
pub fn strip_onomatopoeia(tokens: &[Token], lex: &NonAcceptedLexicon) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !lex.is_onomatopoeia(&t.norm))
        .cloned()
        .collect()
}

/// Coarse word class used by the pattern flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WordClass {
    Preposition,
    Determiner,
    Quantifier,
    Verb,
    Other,
}

const PREPOSITIONS: &[&str] = &[
    "about", "above", "across", "after", "against", "along", "around", "at", "behind", "below",
    "beside", "between", "by", "down", "for", "from", "in", "inside", "into", "near", "of", "off",
    "on", "onto", "out", "outside", "over", "through", "to", "toward", "under", "up", "upon",
    "with", "within", "without",
];
const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our",
    "their", "another", "every", "each", "some", "any",
];
const QUANTIFIERS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "all", "both",
    "many", "much", "more", "several", "few",
];
const NUMERALS: &[&str] = &[
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve",
];
const VERBS: &[&str] = &[
    "be", "bring", "do", "eat", "find", "fix", "found", "get", "give", "go", "have", "help",
    "look", "make", "need", "open", "play", "put", "ride", "screw", "see", "take", "turn", "walk",
    "want", "write",
];

fn builtin_class(norm: &str) -> WordClass {
    if PREPOSITIONS.contains(&norm) {
        WordClass::Preposition
    } else if DETERMINERS.contains(&norm) {
        WordClass::Determiner
    } else if QUANTIFIERS.contains(&norm) {
        WordClass::Quantifier
    } else if VERBS.contains(&norm) {
        WordClass::Verb
    } else {
        WordClass::Other
    }
}

/// Word classes from a `%mor` tier, one per `pos|word` item.
///
/// The alignment with main-tier tokens is by index, which holds for
/// ordinary lines; callers should treat the result as a hint.
pub fn pos_hints_from_mor(mor: &str) -> Vec<Option<WordClass>> {
    mor.split_whitespace()
        .filter_map(|item| item.split_once('|'))
        .map(|(cat, _)| {
            let cat = cat.to_ascii_lowercase();
            let class = if cat.starts_with("prep") {
                WordClass::Preposition
            } else if cat == "det" || cat.starts_with("det:") || cat.ends_with(":det") {
                if cat.contains("num") {
                    WordClass::Quantifier
                } else {
                    WordClass::Determiner
                }
            } else if cat == "qn" || cat == "quant" || cat == "num" {
                WordClass::Quantifier
            } else if cat == "v" || cat.starts_with("v:") {
                WordClass::Verb
            } else {
                WordClass::Other
            };
            Some(class)
        })
        .collect()
}

fn class_at(tokens: &[Token], hints: Option<&[Option<WordClass>]>, i: usize) -> WordClass {
    hints
        .and_then(|h| h.get(i).copied().flatten())
        .unwrap_or_else(|| builtin_class(&tokens[i].norm))
}

fn render_without(tokens: &[Token], skip: usize) -> String {
    tokens
        .iter()
        .enumerate()
        .filter(|(i, t)| *i != skip && t.is_word())
        .map(|(_, t)| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Adjacent functional words of the same kind: preposition-preposition,
/// determiner-determiner or determiner-quantifier (either order).
///
/// For two prepositions the first is kept; a quantifier next to a
/// determiner is dropped; of two determiners the one nearer the noun is
/// kept. The dropped word stays an independent lexical item.
pub fn flag_duplication(
    tokens: &[Token],
    hints: Option<&[Option<WordClass>]>,
) -> Vec<AdvisoryFlag> {
    use WordClass::*;
    let mut out = Vec::new();
    for i in 0..tokens.len().saturating_sub(1) {
        let j = i + 1;
        if !tokens[i].is_word() || !tokens[j].is_word() {
            continue;
        }
        let drop = match (class_at(tokens, hints, i), class_at(tokens, hints, j)) {
            (Preposition, Preposition) => j,
            (Determiner, Quantifier) => j,
            (Quantifier, Determiner) => i,
            (Determiner, Determiner) => i,
            _ => continue,
        };
        let keep = if drop == i { j } else { i };
        let mut flag = AdvisoryFlag::new(
            FlagKind::Duplication,
            Vec::from([Ordno::from_index(i), Ordno::from_index(j)]),
            format!(
                "duplicated functional word: keep \"{}\", leave \"{}\" out of the structure \
                 as an independent lexical item ({})",
                tokens[keep].surface,
                tokens[drop].surface,
                render_without(tokens, drop)
            ),
        );
        flag.exclude.push(Ordno::from_index(drop));
        out.push(flag);
    }
    out
}

/// Default conversational items.
pub const DISCOURSE_ITEMS: &[&str] = &["hello", "hi", "ok", "okay", "bye", "goodbye", "byebye"];

fn is_numeral(norm: &str) -> bool {
    NUMERALS.contains(&norm) || (!norm.is_empty() && norm.bytes().all(|b| b.is_ascii_digit()))
}

/// Conversational items (`hello`, `ok`, ...) and list-like sequences.
///
/// An utterance-initial item is suggested to link to the next word. An item
/// inside a farewell sequence or anywhere but the start is suggested for
/// exclusion as pragmatic. Two or more numerals in a row and nothing else
/// form a list with no structure.
pub fn flag_discourse_item(tokens: &[Token], items: &BTreeSet<String>) -> Option<AdvisoryFlag> {
    let words: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i].is_word()).collect();
    if words.len() >= 2 && words.iter().all(|&i| is_numeral(&tokens[i].norm)) {
        return Some(AdvisoryFlag::new(
            FlagKind::ListSequence,
            words.iter().map(|&i| Ordno::from_index(i)).collect(),
            "sequence produced as a list: no structure (reject as list_sequence)".into(),
        ));
    }

    let (rank, &pos) = words
        .iter()
        .enumerate()
        .find(|(_, &i)| items.contains(&tokens[i].norm))?;
    let farewell = words
        .windows(2)
        .any(|w| tokens[w[0]].norm == "see" && tokens[w[1]].norm == "you");
    let item = &tokens[pos];
    let span = Vec::from([Ordno::from_index(pos)]);

    if rank == 0 && !farewell {
        if let Some(&next) = words.get(1) {
            let mut flag = AdvisoryFlag::new(
                FlagKind::DiscourseItem,
                span,
                format!(
                    "non-structural item \"{}\": link it to the first element of what follows ({} -> {})",
                    item.surface, item.surface, tokens[next].surface
                ),
            );
            flag.suggested_arcs.push(DependencyArc {
                dependent: Ordno::from_index(pos),
                head: Ordno::from_index(next),
            });
            return Some(flag);
        }
        return Some(AdvisoryFlag::new(
            FlagKind::DiscourseItem,
            span,
            format!("non-structural item \"{}\" on its own", item.surface),
        ));
    }
    let mut flag = AdvisoryFlag::new(
        FlagKind::DiscourseItem,
        span.clone(),
        format!(
            "\"{}\" among analogous expressions reads as pragmatic: leave it out of any structure",
            item.surface
        ),
    );
    flag.exclude = span;
    Some(flag)
}

fn multiset<'a, I: IntoIterator<Item = &'a str>>(words: I) -> BTreeMap<&'a str, usize> {
    let mut m = BTreeMap::new();
    for w in words {
        *m.entry(w).or_insert(0) += 1;
    }
    m
}

/// Possible imitation: the child's words are a sub-multiset of one of the
/// last `window` adult turns, or the line follows untranscribed adult talk.
pub fn flag_imitation(
    tokens: &[Token],
    ctx: &UtteranceContext,
    window: usize,
) -> Option<AdvisoryFlag> {
    let span: Vec<Ordno> = (0..tokens.len())
        .filter(|&i| tokens[i].is_word())
        .map(Ordno::from_index)
        .collect();
    if span.is_empty() {
        return None;
    }
    if ctx.after_untranscribed_conversation {
        return Some(AdvisoryFlag::new(
            FlagKind::ImitationCandidate,
            span,
            "produced right after untranscribed adult conversation: possible imitation".into(),
        ));
    }
    let child = multiset(
        tokens
            .iter()
            .filter(|t| t.is_word())
            .map(|t| t.norm.as_str()),
    );
    let start = ctx.preceding.len().saturating_sub(window.max(1));
    for turn in ctx.preceding[start..].iter().rev() {
        let adult = multiset(turn.words.iter().map(String::as_str));
        if child
            .iter()
            .all(|(w, n)| adult.get(w).is_some_and(|m| m >= n))
        {
            return Some(AdvisoryFlag::new(
                FlagKind::ImitationCandidate,
                span,
                format!(
                    "all words occur in {} at line {} (\"{}\"): possible imitation; adapted \
                     imitations may still be accepted",
                    turn.speaker,
                    turn.line_no,
                    turn.words.join(" ")
                ),
            ));
        }
    }
    None
}

const OBJECT_PRONOUNS: &[&str] = &["me", "my", "him", "her", "them", "us"];
const COPULA_SUBJECTS: &[&str] = &["that", "this", "it", "there", "he", "she"];

/// Pronoun-case slips (`me write`), a missing copula (`that my pen`) and
/// utterance-initial `no` before a verb (`no put it here`).
pub fn flag_patterns(tokens: &[Token], hints: Option<&[Option<WordClass>]>) -> Vec<AdvisoryFlag> {
    let words: Vec<usize> = (0..tokens.len()).filter(|&i| tokens[i].is_word()).collect();
    let (Some(&first), Some(&second)) = (words.first(), words.get(1)) else {
        return Vec::new();
    };
    let span = Vec::from([Ordno::from_index(first), Ordno::from_index(second)]);
    let w0 = tokens[first].norm.as_str();
    let c1 = class_at(tokens, hints, second);
    let mut out = Vec::new();
    if OBJECT_PRONOUNS.contains(&w0) && c1 == WordClass::Verb {
        out.push(AdvisoryFlag::new(
            FlagKind::PronounCase,
            span.clone(),
            format!(
                "\"{}\" in subject position: pronoun-case slips are still structured",
                tokens[first].surface
            ),
        ));
    }
    if COPULA_SUBJECTS.contains(&w0) && c1 == WordClass::Determiner {
        out.push(AdvisoryFlag::new(
            FlagKind::MissingCopula,
            span.clone(),
            "copula seems omitted: the predication can still be structured".into(),
        ));
    }
    if w0 == "no" && c1 == WordClass::Verb {
        out.push(AdvisoryFlag::new(
            FlagKind::MissingCopula,
            span,
            "negation: \"no\" may stand for \"don't\" and join the structure; check context \
             for a \"No, ...\" reading"
                .into(),
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriteriaConfig {
    pub lexicon: NonAcceptedLexicon,
    pub discourse_items: BTreeSet<String>,
    /// Number of preceding adult turns searched for imitation sources.
    pub imitation_window: usize,
}

impl Default for CriteriaConfig {
    fn default() -> Self {
        CriteriaConfig {
            lexicon: NonAcceptedLexicon::default(),
            discourse_items: DISCOURSE_ITEMS.iter().map(|s| s.to_string()).collect(),
            imitation_window: 3,
        }
    }
}

/// All flags for one utterance, in a fixed order.
pub fn advise(
    tokens: &[Token],
    ctx: Option<&UtteranceContext>,
    cfg: &CriteriaConfig,
) -> Vec<AdvisoryFlag> {
    let hints = ctx
        .and_then(|c| c.dependent("mor"))
        .map(pos_hints_from_mor)
        .filter(|h| h.len() == tokens.len());
    let hints = hints.as_deref();

    let mut out: Vec<AdvisoryFlag> = tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| classify_token(t, Ordno::from_index(i), &cfg.lexicon))
        .collect();
    out.extend(flag_duplication(tokens, hints));
    out.extend(flag_discourse_item(tokens, &cfg.discourse_items));
    out.extend(flag_patterns(tokens, hints));
    if let Some(ctx) = ctx {
        out.extend(flag_imitation(tokens, ctx, cfg.imitation_window));
    }
    out
}
