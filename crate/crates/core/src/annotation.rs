//! Annotated utterances: tokens, syntactic structures as dependency in-trees,
//! and the annotator's decision.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ingest::Token;

/// 1-based token position inside an utterance, as in the DGA `ordno` element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(transparent))]
pub struct Ordno(pub u32);

impl Ordno {
    /// Zero-based index into a token vector.
    pub fn index(self) -> usize {
        (self.0 as usize).wrapping_sub(1)
    }

    pub fn from_index(index: usize) -> Self {
        Ordno(index as u32 + 1)
    }
}

impl fmt::Display for Ordno {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An arc from a dependent (complement side) to its head.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DependencyArc {
    pub dependent: Ordno,
    pub head: Ordno,
}

impl DependencyArc {
    pub fn new(dependent: u32, head: u32) -> Self {
        DependencyArc {
            dependent: Ordno(dependent),
            head: Ordno(head),
        }
    }
}

/// A set of tokens linked into one in-tree. A single word is a size-1
/// structure with no arcs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Structure {
    pub members: BTreeSet<Ordno>,
    pub arcs: BTreeSet<DependencyArc>,
}

impl Structure {
    pub fn single(pos: Ordno) -> Self {
        Structure {
            members: [pos].into_iter().collect(),
            arcs: BTreeSet::new(),
        }
    }

    /// Structure whose members are exactly the arc endpoints.
    pub fn from_arcs<I: IntoIterator<Item = DependencyArc>>(arcs: I) -> Self {
        let arcs: BTreeSet<DependencyArc> = arcs.into_iter().collect();
        let members = arcs.iter().flat_map(|a| [a.dependent, a.head]).collect();
        Structure { members, arcs }
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Members without an outgoing arc. A valid structure has exactly one.
    pub fn roots(&self) -> Vec<Ordno> {
        let deps: BTreeSet<Ordno> = self.arcs.iter().map(|a| a.dependent).collect();
        self.members
            .iter()
            .copied()
            .filter(|m| !deps.contains(m))
            .collect()
    }

    pub fn root(&self) -> Option<Ordno> {
        match self.roots().as_slice() {
            [r] => Some(*r),
            _ => None,
        }
    }

    /// Groups arcs into weakly connected structures and adds `singles` as
    /// size-1 structures. Output is sorted by smallest member.
    pub fn group<I, J>(arcs: I, singles: J) -> Vec<Structure>
    where
        I: IntoIterator<Item = DependencyArc>,
        J: IntoIterator<Item = Ordno>,
    {
        let arcs: Vec<DependencyArc> = arcs.into_iter().collect();
        let mut uf = UnionFind::default();
        for a in &arcs {
            uf.union(a.dependent, a.head);
        }
        for s in singles {
            uf.find(s);
        }
        let mut by_root: BTreeMap<Ordno, Structure> = BTreeMap::new();
        for m in uf.keys() {
            let r = uf.find(m);
            by_root.entry(r).or_default().members.insert(m);
        }
        for a in arcs {
            let r = uf.find(a.dependent);
            by_root.get_mut(&r).expect("grouped").arcs.insert(a);
        }
        let mut out: Vec<Structure> = by_root.into_values().collect();
        out.sort_by_key(|s| s.members.iter().next().copied());
        out
    }

    /// Structural problems of this structure alone, ignoring token context.
    pub fn violations(&self) -> Vec<ViolationKind> {
        let mut out = Vec::new();
        if self.members.is_empty() {
            out.push(ViolationKind::EmptyStructure);
            return out;
        }
        let mut outgoing: BTreeMap<Ordno, usize> = BTreeMap::new();
        let mut well_formed = true;
        for a in &self.arcs {
            if a.dependent == a.head {
                out.push(ViolationKind::SelfLoop(a.dependent));
                well_formed = false;
                continue;
            }
            if !self.members.contains(&a.dependent) || !self.members.contains(&a.head) {
                out.push(ViolationKind::ArcOutsideStructure(*a));
                well_formed = false;
                continue;
            }
            *outgoing.entry(a.dependent).or_default() += 1;
        }
        for (&tok, &n) in &outgoing {
            if n > 1 {
                out.push(ViolationKind::MultipleHeads(tok));
                well_formed = false;
            }
        }
        if has_cycle(&self.arcs) {
            out.push(ViolationKind::Cycle);
            well_formed = false;
        }
        if well_formed {
            let mut uf = UnionFind::default();
            for m in &self.members {
                uf.find(*m);
            }
            for a in &self.arcs {
                uf.union(a.dependent, a.head);
            }
            let first = uf.find(*self.members.iter().next().expect("non-empty"));
            if self.members.iter().any(|m| uf.find(*m) != first) {
                out.push(ViolationKind::Disconnected);
            }
        }
        out
    }
}

fn has_cycle(arcs: &BTreeSet<DependencyArc>) -> bool {
    let mut succ: BTreeMap<Ordno, Vec<Ordno>> = BTreeMap::new();
    for a in arcs.iter().filter(|a| a.dependent != a.head) {
        succ.entry(a.dependent).or_default().push(a.head);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<Ordno, u8> = BTreeMap::new();
    for &start in succ.keys() {
        if state.get(&start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(Ordno, usize)> = Vec::from([(start, 0)]);
        state.insert(start, 1);
        while let Some((node, next)) = stack.pop() {
            let children = succ.get(&node).map(Vec::as_slice).unwrap_or(&[]);
            if next < children.len() {
                stack.push((node, next + 1));
                let child = children[next];
                match state.get(&child).copied().unwrap_or(0) {
                    1 => return true,
                    0 => {
                        state.insert(child, 1);
                        stack.push((child, 0));
                    }
                    _ => {}
                }
            } else {
                state.insert(node, 2);
            }
        }
    }
    false
}

#[derive(Default)]
struct UnionFind {
    parent: BTreeMap<Ordno, Ordno>,
}

impl UnionFind {
    fn find(&mut self, x: Ordno) -> Ordno {
        let mut root = *self.parent.entry(x).or_insert(x);
        while let Some(&p) = self.parent.get(&root) {
            if p == root {
                break;
            }
            root = p;
        }
        let mut cur = x;
        while cur != root {
            let next = self.parent[&cur];
            self.parent.insert(cur, root);
            cur = next;
        }
        root
    }

    fn union(&mut self, a: Ordno, b: Ordno) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }

    fn keys(&self) -> Vec<Ordno> {
        self.parent.keys().copied().collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DecisionStatus {
    #[default]
    Accepted,
    Rejected,
    /// No structure; every word enters the graph as an isolated node.
    IsolatedWords,
}

impl DecisionStatus {
    pub const ALL: [DecisionStatus; 3] = [
        DecisionStatus::Accepted,
        DecisionStatus::Rejected,
        DecisionStatus::IsolatedWords,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DecisionStatus::Accepted => "accepted",
            DecisionStatus::Rejected => "rejected",
            DecisionStatus::IsolatedWords => "isolated_words",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RejectReason {
    Onomatopoeia,
    Untranscribed,
    Imitation,
    Unstructured,
    ListSequence,
    AttentionVocative,
    Ambiguous,
    Other,
}

impl RejectReason {
    pub const ALL: [RejectReason; 8] = [
        RejectReason::Onomatopoeia,
        RejectReason::Untranscribed,
        RejectReason::Imitation,
        RejectReason::Unstructured,
        RejectReason::ListSequence,
        RejectReason::AttentionVocative,
        RejectReason::Ambiguous,
        RejectReason::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::Onomatopoeia => "onomatopoeia",
            RejectReason::Untranscribed => "untranscribed",
            RejectReason::Imitation => "imitation",
            RejectReason::Unstructured => "unstructured",
            RejectReason::ListSequence => "list_sequence",
            RejectReason::AttentionVocative => "attention_vocative",
            RejectReason::Ambiguous => "ambiguous",
            RejectReason::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnnotationDecision {
    pub status: DecisionStatus,
    #[cfg_attr(feature = "serde", serde(default))]
    pub reason: Option<RejectReason>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub note: String,
}

impl AnnotationDecision {
    pub fn accepted() -> Self {
        Self::default()
    }

    pub fn rejected(reason: RejectReason) -> Self {
        AnnotationDecision {
            status: DecisionStatus::Rejected,
            reason: Some(reason),
            note: String::new(),
        }
    }

    pub fn isolated_words() -> Self {
        AnnotationDecision {
            status: DecisionStatus::IsolatedWords,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnnotatedUtterance {
    /// Token `i` has ordno `i + 1`.
    pub tokens: Vec<Token>,
    pub structures: Vec<Structure>,
    pub decision: AnnotationDecision,
}

impl AnnotatedUtterance {
    pub fn new(tokens: Vec<Token>) -> Self {
        AnnotatedUtterance {
            tokens,
            ..Self::default()
        }
    }

    pub fn token(&self, pos: Ordno) -> Option<&Token> {
        self.tokens.get(pos.index())
    }

    /// Structures that count towards the graph and the size statistics.
    ///
    /// Accepted utterances contribute their structures. `isolated_words`
    /// contributes its explicit size-1 structures, or every word token when
    /// none were recorded. Rejected utterances contribute nothing.
    pub fn contributing_structures(&self) -> Vec<Structure> {
        match self.decision.status {
            DecisionStatus::Accepted => self.structures.clone(),
            DecisionStatus::Rejected => Vec::new(),
            DecisionStatus::IsolatedWords if self.structures.is_empty() => self
                .tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.is_word())
                .map(|(i, _)| Structure::single(Ordno::from_index(i)))
                .collect(),
            DecisionStatus::IsolatedWords => self
                .structures
                .iter()
                .flat_map(|s| s.members.iter().copied().map(Structure::single))
                .collect(),
        }
    }

    /// Sorts structures by their smallest member.
    pub fn canonicalize(&mut self) {
        self.structures
            .sort_by_key(|s| s.members.iter().next().copied());
    }

    /// Invariant violations; `number` is the 1-based utterance number used
    /// in the reports.
    pub fn validate(&self, number: usize) -> Vec<Violation> {
        let mut kinds = Vec::new();
        let d = &self.decision;
        if d.status == DecisionStatus::Rejected && d.reason.is_none() {
            kinds.push(ViolationKind::MissingReason);
        }
        let mut seen: BTreeSet<Ordno> = BTreeSet::new();
        for s in &self.structures {
            for &m in &s.members {
                match self.token(m) {
                    None => kinds.push(ViolationKind::PositionOutOfRange(m)),
                    Some(t) if !t.is_word() => kinds.push(ViolationKind::NonLexicalMember(m)),
                    Some(_) => {}
                }
                if !seen.insert(m) {
                    kinds.push(ViolationKind::OverlappingStructures(m));
                }
            }
            if d.status == DecisionStatus::IsolatedWords && !s.arcs.is_empty() {
                kinds.push(ViolationKind::ArcsOnIsolatedWords);
            }
            kinds.extend(s.violations());
        }
        kinds
            .into_iter()
            .map(|kind| Violation {
                utterance: number,
                kind,
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnnotatedDocument {
    pub corpus_id: String,
    pub utterances: Vec<AnnotatedUtterance>,
}

impl AnnotatedDocument {
    pub fn new(corpus_id: impl Into<String>) -> Self {
        AnnotatedDocument {
            corpus_id: corpus_id.into(),
            utterances: Vec::new(),
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        self.utterances
            .iter()
            .enumerate()
            .flat_map(|(i, u)| u.validate(i + 1))
            .collect()
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "kind", content = "at", rename_all = "snake_case")
)]
pub enum ViolationKind {
    SelfLoop(Ordno),
    MultipleHeads(Ordno),
    Cycle,
    Disconnected,
    ArcOutsideStructure(DependencyArc),
    EmptyStructure,
    OverlappingStructures(Ordno),
    PositionOutOfRange(Ordno),
    NonLexicalMember(Ordno),
    MissingReason,
    ArcsOnIsolatedWords,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::SelfLoop(p) => write!(f, "self-loop on token {p}"),
            ViolationKind::MultipleHeads(p) => write!(f, "multiple heads for token {p}"),
            ViolationKind::Cycle => f.write_str("cycle"),
            ViolationKind::Disconnected => f.write_str("structure is not connected"),
            ViolationKind::ArcOutsideStructure(a) => {
                write!(f, "arc {}->{} leaves its structure", a.dependent, a.head)
            }
            ViolationKind::EmptyStructure => f.write_str("empty structure"),
            ViolationKind::OverlappingStructures(p) => {
                write!(f, "token {p} belongs to more than one structure")
            }
            ViolationKind::PositionOutOfRange(p) => write!(f, "token {p} out of range"),
            ViolationKind::NonLexicalMember(p) => {
                write!(f, "token {p} is not a lexical item (xxx, yyy or 0)")
            }
            ViolationKind::MissingReason => f.write_str("rejected without a reason"),
            ViolationKind::ArcsOnIsolatedWords => {
                f.write_str("arcs on an utterance marked isolated_words")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    /// 1-based utterance number within the document.
    pub utterance: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "utterance {}: {}", self.utterance, self.kind)
    }
}

impl core::error::Error for Violation {}
