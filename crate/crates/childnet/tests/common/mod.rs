//! Generator for valid annotated documents.

use childnet_core::annotation::{
    AnnotatedDocument, AnnotatedUtterance, AnnotationDecision, DecisionStatus, DependencyArc,
    Ordno, RejectReason, Structure,
};
use childnet_core::ingest::Token;
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = String> {
    prop_oneof![
        6 => "[a-zA-Z\u{f1}\u{e9}\u{df}&'\"]{1,8}",
        1 => Just("xxx".to_string()),
        1 => Just("0".to_string()),
    ]
}

/// Utterance from raw choices: each word token either stays out of any
/// structure, opens a new one or joins the current one, attached to an
/// earlier member.
fn build(
    surfaces: Vec<String>,
    ctrl: Vec<u32>,
    status: u8,
    reason: u8,
    note: String,
) -> AnnotatedUtterance {
    let mut u = AnnotatedUtterance::new(surfaces.iter().map(|s| Token::new(s)).collect());
    let status = DecisionStatus::ALL[status as usize % 3];
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let mut arcs: Vec<Vec<DependencyArc>> = Vec::new();
    for (i, t) in u.tokens.iter().enumerate() {
        if !t.is_word() {
            continue;
        }
        let pos = i as u32 + 1;
        let c = ctrl[i];
        match c % 4 {
            0 => continue,
            1 => {
                groups.push(vec![pos]);
                arcs.push(Vec::new());
            }
            _ => match groups.last_mut() {
                Some(g) => {
                    let head = g[(c / 4) as usize % g.len()];
                    g.push(pos);
                    arcs.last_mut().unwrap().push(DependencyArc::new(pos, head));
                }
                None => {
                    groups.push(vec![pos]);
                    arcs.push(Vec::new());
                }
            },
        }
    }
    for (g, a) in groups.into_iter().zip(arcs) {
        if status == DecisionStatus::IsolatedWords {
            u.structures
                .extend(g.into_iter().map(|p| Structure::single(Ordno(p))));
        } else {
            let mut s = Structure::from_arcs(a);
            s.members.extend(g.into_iter().map(Ordno));
            u.structures.push(s);
        }
    }
    u.decision = AnnotationDecision {
        status,
        reason: match status {
            DecisionStatus::Rejected => Some(RejectReason::ALL[reason as usize % 8]),
            _ if reason % 3 == 0 => Some(RejectReason::ALL[reason as usize % 8]),
            _ => None,
        },
        note,
    };
    u.canonicalize();
    u
}

fn utterance() -> impl Strategy<Value = AnnotatedUtterance> {
    (1usize..10)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(surface(), n),
                proptest::collection::vec(any::<u32>(), n),
                any::<u8>(),
                any::<u8>(),
                prop_oneof![3 => Just(String::new()), 1 => "[ -~\u{e0}-\u{ff}]{0,20}"],
            )
        })
        .prop_map(|(s, c, st, r, note)| build(s, c, st, r, note))
}

pub fn document() -> impl Strategy<Value = AnnotatedDocument> {
    (
        "[a-z0-9_&]{0,10}",
        proptest::collection::vec(utterance(), 0..8),
    )
        .prop_map(|(id, utterances)| AnnotatedDocument {
            corpus_id: id,
            utterances,
        })
}
