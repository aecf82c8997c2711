//! Unlabeled head/complement constituency trees and their projection onto
//! dependency arcs.
//!
//! For every phrase and every complement child of that phrase, an arc runs
//! from the head word of the complement to the head word of the phrase. The
//! head word of a phrase is the head word of its designated head child, so
//! the root of the resulting in-tree is the head word of the whole tree.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::annotation::{DependencyArc, Ordno, Structure};
use crate::ingest::Token;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ConstituencyNode {
    Leaf(Ordno),
    Phrase {
        head: Box<ConstituencyNode>,
        complements: Vec<ConstituencyNode>,
    },
}

impl ConstituencyNode {
    pub fn leaf(pos: u32) -> Self {
        ConstituencyNode::Leaf(Ordno(pos))
    }

    pub fn phrase(head: ConstituencyNode, complements: Vec<ConstituencyNode>) -> Self {
        ConstituencyNode::Phrase {
            head: Box::new(head),
            complements,
        }
    }

    /// The lexical head: follows designated head children down to a leaf.
    pub fn head_word(&self) -> Ordno {
        let mut node = self;
        loop {
            match node {
                ConstituencyNode::Leaf(p) => return *p,
                ConstituencyNode::Phrase { head, .. } => node = head,
            }
        }
    }

    pub fn leaves(&self) -> Vec<Ordno> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Ordno>) {
        match self {
            ConstituencyNode::Leaf(p) => out.push(*p),
            ConstituencyNode::Phrase { head, complements } => {
                head.collect_leaves(out);
                for c in complements {
                    c.collect_leaves(out);
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), ProjectionError> {
        self.check_phrases()?;
        let mut seen = BTreeSet::new();
        for p in self.leaves() {
            if !seen.insert(p) {
                return Err(ProjectionError::DuplicateLeaf(p));
            }
        }
        Ok(())
    }

    fn check_phrases(&self) -> Result<(), ProjectionError> {
        if let ConstituencyNode::Phrase { head, complements } = self {
            if complements.is_empty() {
                return Err(ProjectionError::PhraseWithoutComplement);
            }
            head.check_phrases()?;
            for c in complements {
                c.check_phrases()?;
            }
        }
        Ok(())
    }

    /// Dependency arcs of this (sub)tree.
    pub fn project(&self) -> Result<ArcSet, ProjectionError> {
        self.validate()?;
        let mut arcs = BTreeSet::new();
        self.emit_arcs(&mut arcs);
        Ok(ArcSet(arcs))
    }

    fn emit_arcs(&self, arcs: &mut BTreeSet<DependencyArc>) {
        if let ConstituencyNode::Phrase { head, complements } = self {
            let target = head.head_word();
            head.emit_arcs(arcs);
            for c in complements {
                arcs.insert(DependencyArc {
                    dependent: c.head_word(),
                    head: target,
                });
                c.emit_arcs(arcs);
            }
        }
    }

    /// Bracketed rendering with words from `tokens`; head children carry `^`.
    pub fn to_bracketed(&self, tokens: &[Token]) -> String {
        let mut out = String::new();
        self.write_bracketed(tokens, &mut out);
        out
    }

    fn write_bracketed(&self, tokens: &[Token], out: &mut String) {
        match self {
            ConstituencyNode::Leaf(p) => match tokens.get(p.index()) {
                Some(t) => out.push_str(&t.surface),
                None => out.push_str(&alloc::format!("@{}", p.0)),
            },
            ConstituencyNode::Phrase { head, complements } => {
                // children in surface order, head marked
                let mut children: Vec<(bool, &ConstituencyNode)> = complements
                    .iter()
                    .map(|c| (false, c))
                    .chain(core::iter::once((true, head.as_ref())))
                    .collect();
                children.sort_by_key(|(_, c)| c.leaves().into_iter().min());
                out.push('[');
                for (i, (is_head, c)) in children.into_iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    if is_head {
                        out.push('^');
                    }
                    c.write_bracketed(tokens, out);
                }
                out.push(']');
            }
        }
    }
}

/// A sentence tree. When `finite_verb` is set, that token must be the head
/// word of the root (finite verbs head the sentence).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstituencyTree {
    pub root: ConstituencyNode,
    pub finite_verb: Option<Ordno>,
}

impl ConstituencyTree {
    pub fn new(root: ConstituencyNode) -> Self {
        ConstituencyTree {
            root,
            finite_verb: None,
        }
    }

    pub fn head_word(&self) -> Ordno {
        self.root.head_word()
    }

    pub fn validate(&self) -> Result<(), ProjectionError> {
        self.root.validate()?;
        if let Some(verb) = self.finite_verb {
            let head = self.root.head_word();
            if verb != head {
                return Err(ProjectionError::FiniteVerbNotHead { verb, head });
            }
        }
        Ok(())
    }
}

/// Arc set of one in-tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ArcSet(pub BTreeSet<DependencyArc>);

impl ArcSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DependencyArc> {
        self.0.iter()
    }

    pub fn into_structure(self, members: impl IntoIterator<Item = Ordno>) -> Structure {
        let mut s = Structure::from_arcs(self.0);
        s.members.extend(members);
        s
    }
}

impl FromIterator<DependencyArc> for ArcSet {
    fn from_iter<T: IntoIterator<Item = DependencyArc>>(iter: T) -> Self {
        ArcSet(iter.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionError {
    PhraseWithoutComplement,
    DuplicateLeaf(Ordno),
    FiniteVerbNotHead { verb: Ordno, head: Ordno },
    EmptyOrder,
    UnknownPosition(Ordno),
    SelfLoop(Ordno),
    MultipleHeads(Ordno),
    RootCount(usize),
    Cycle,
    Syntax(String),
}

impl fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionError::PhraseWithoutComplement => f.write_str("phrase without complement"),
            ProjectionError::DuplicateLeaf(p) => write!(f, "token {p} appears twice in the tree"),
            ProjectionError::FiniteVerbNotHead { verb, head } => {
                write!(
                    f,
                    "finite verb {verb} does not head the sentence (head is {head})"
                )
            }
            ProjectionError::EmptyOrder => f.write_str("no tokens"),
            ProjectionError::UnknownPosition(p) => {
                write!(f, "arc endpoint {p} not among the tokens")
            }
            ProjectionError::SelfLoop(p) => write!(f, "self-loop on {p}"),
            ProjectionError::MultipleHeads(p) => write!(f, "token {p} has more than one head"),
            ProjectionError::RootCount(n) => write!(f, "expected exactly one root, found {n}"),
            ProjectionError::Cycle => f.write_str("arcs contain a cycle"),
            ProjectionError::Syntax(msg) => write!(f, "bracket syntax: {msg}"),
        }
    }
}

impl core::error::Error for ProjectionError {}

/// Projects a sentence tree onto its dependency arcs.
pub fn project(tree: &ConstituencyTree) -> Result<ArcSet, ProjectionError> {
    tree.validate()?;
    tree.root.project()
}

/// Rebuilds a tree from an in-tree over `order` (tokens in surface order).
///
/// A head with several dependents absorbs them one at a time, nearest first
/// (ties go to the left dependent), so the innermost phrase holds the closest
/// dependent. Only the arc set survives a round trip, not the original
/// bracketing.
pub fn invert(arcs: &ArcSet, order: &[Ordno]) -> Result<ConstituencyNode, ProjectionError> {
    if order.is_empty() {
        return Err(ProjectionError::EmptyOrder);
    }
    let rank: BTreeMap<Ordno, usize> = order.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    if rank.len() != order.len() {
        let dup = order
            .iter()
            .enumerate()
            .find(|(i, p)| order[..*i].contains(p))
            .map(|(_, p)| *p)
            .expect("duplicate exists");
        return Err(ProjectionError::DuplicateLeaf(dup));
    }

    let mut head_of: BTreeMap<Ordno, Ordno> = BTreeMap::new();
    let mut dependents: BTreeMap<Ordno, Vec<Ordno>> = BTreeMap::new();
    for a in arcs.iter() {
        for p in [a.dependent, a.head] {
            if !rank.contains_key(&p) {
                return Err(ProjectionError::UnknownPosition(p));
            }
        }
        if a.dependent == a.head {
            return Err(ProjectionError::SelfLoop(a.dependent));
        }
        if head_of.insert(a.dependent, a.head).is_some() {
            return Err(ProjectionError::MultipleHeads(a.dependent));
        }
        dependents.entry(a.head).or_default().push(a.dependent);
    }

    let roots: Vec<Ordno> = order
        .iter()
        .copied()
        .filter(|p| !head_of.contains_key(p))
        .collect();
    if roots.len() != 1 {
        // one head per token: zero roots means every token sits on a cycle
        return Err(if roots.is_empty() {
            ProjectionError::Cycle
        } else {
            ProjectionError::RootCount(roots.len())
        });
    }
    let root = roots[0];

    // with one head per token and a single root, unreachable tokens lie on cycles
    let mut reached = 0usize;
    let mut stack = Vec::from([root]);
    while let Some(p) = stack.pop() {
        reached += 1;
        if let Some(ds) = dependents.get(&p) {
            stack.extend(ds.iter().copied());
        }
    }
    if reached != order.len() {
        return Err(ProjectionError::Cycle);
    }

    for (h, ds) in dependents.iter_mut() {
        let hr = rank[h];
        ds.sort_by_key(|d| (rank[d].abs_diff(hr), rank[d]));
    }
    Ok(build(root, &dependents))
}

fn build(head: Ordno, dependents: &BTreeMap<Ordno, Vec<Ordno>>) -> ConstituencyNode {
    let mut node = ConstituencyNode::Leaf(head);
    if let Some(ds) = dependents.get(&head) {
        for &d in ds {
            node = ConstituencyNode::phrase(node, Vec::from([build(d, dependents)]));
        }
    }
    node
}

/// Parses bracket notation against an utterance's tokens.
///
/// `[telephone [^go [right ^there]]]`: a phrase is a bracketed list of at
/// least two children, exactly one of them marked `^` as head. Words are
/// matched case-insensitively to the next matching token, left to right; a
/// word may pin its position with `word@3`. A `!` prefix marks the finite
/// verb of the sentence (`^!go`).
pub fn parse_bracketed(text: &str, tokens: &[Token]) -> Result<ConstituencyTree, ProjectionError> {
    let mut p = BracketParser {
        chars: text.chars().collect(),
        pos: 0,
        tokens,
        cursor: 0,
        finite: None,
    };
    let (_, root) = p.node()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    let tree = ConstituencyTree {
        root,
        finite_verb: p.finite,
    };
    tree.validate()?;
    Ok(tree)
}

struct BracketParser<'a> {
    chars: Vec<char>,
    pos: usize,
    tokens: &'a [Token],
    cursor: usize,
    finite: Option<Ordno>,
}

impl BracketParser<'_> {
    fn err(&self, msg: &str) -> ProjectionError {
        ProjectionError::Syntax(alloc::format!("{msg} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.chars.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Returns (is_head, node).
    fn node(&mut self) -> Result<(bool, ConstituencyNode), ProjectionError> {
        self.skip_ws();
        let is_head = self.eat('^');
        let finite = self.eat('!');
        if self.eat('[') {
            if finite {
                return Err(self.err("'!' must mark a word"));
            }
            let mut head = None;
            let mut complements = Vec::new();
            loop {
                self.skip_ws();
                if self.eat(']') {
                    break;
                }
                if self.pos >= self.chars.len() {
                    return Err(self.err("unclosed '['"));
                }
                let (h, child) = self.node()?;
                if h {
                    if head.is_some() {
                        return Err(self.err("phrase with two heads"));
                    }
                    head = Some(child);
                } else {
                    complements.push(child);
                }
            }
            let head = head.ok_or_else(|| self.err("phrase without '^' head"))?;
            if complements.is_empty() {
                return Err(ProjectionError::PhraseWithoutComplement);
            }
            return Ok((is_head, ConstituencyNode::phrase(head, complements)));
        }

        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| !c.is_whitespace() && !matches!(c, '[' | ']' | '^'))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a word or '['"));
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        let pos = self.resolve(&word)?;
        if finite {
            if self.finite.is_some() {
                return Err(self.err("two finite verbs marked"));
            }
            self.finite = Some(pos);
        }
        Ok((is_head, ConstituencyNode::Leaf(pos)))
    }

    fn resolve(&mut self, word: &str) -> Result<Ordno, ProjectionError> {
        if let Some((w, n)) = word.rsplit_once('@') {
            let n: u32 = n.parse().map_err(|_| self.err("bad position after '@'"))?;
            let ok = self
                .tokens
                .get(Ordno(n).index())
                .is_some_and(|t| w.is_empty() || t.norm == Token::new(w).norm);
            if !ok {
                return Err(self.err("word does not match the pinned position"));
            }
            self.cursor = self.cursor.max(n as usize);
            return Ok(Ordno(n));
        }
        let norm = Token::new(word).norm;
        let found = self.tokens[self.cursor.min(self.tokens.len())..]
            .iter()
            .position(|t| t.norm == norm)
            .map(|i| i + self.cursor)
            .ok_or_else(|| self.err("word not found among the remaining tokens"))?;
        self.cursor = found + 1;
        Ok(Ordno::from_index(found))
    }
}
