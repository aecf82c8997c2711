//! Proptest generators for dependency in-trees and head/complement trees.

use childnet_core::annotation::{DependencyArc, Ordno};
use childnet_core::projection::{ArcSet, ConstituencyNode};
use proptest::prelude::*;

/// Random in-tree over positions `1..=n`: nodes are attached in a shuffled
/// order, each to one already placed.
pub fn in_tree() -> impl Strategy<Value = (ArcSet, Vec<Ordno>)> {
    (1usize..=10).prop_flat_map(|n| {
        let positions: Vec<u32> = (1..=n as u32).collect();
        (
            Just(positions.clone()).prop_shuffle(),
            proptest::collection::vec(any::<usize>(), n),
        )
            .prop_map(|(attach, picks)| {
                let arcs = (1..attach.len())
                    .map(|i| DependencyArc::new(attach[i], attach[picks[i] % i]))
                    .collect();
                let order = (1..=attach.len() as u32).map(Ordno).collect();
                (arcs, order)
            })
    })
}

fn shape() -> impl Strategy<Value = ConstituencyNode> {
    let leaf = Just(ConstituencyNode::leaf(0));
    leaf.prop_recursive(5, 24, 3, |inner| {
        (inner.clone(), proptest::collection::vec(inner, 1..=3))
            .prop_map(|(h, cs)| ConstituencyNode::phrase(h, cs))
    })
}

fn number(node: &mut ConstituencyNode, next: &mut impl Iterator<Item = u32>) {
    match node {
        ConstituencyNode::Leaf(p) => *p = Ordno(next.next().unwrap()),
        ConstituencyNode::Phrase { head, complements } => {
            number(head, next);
            for c in complements {
                number(c, next);
            }
        }
    }
}

/// Head/complement tree with leaves numbered by a random permutation.
pub fn tree() -> impl Strategy<Value = ConstituencyNode> {
    shape().prop_flat_map(|s| {
        let k = s.leaves().len() as u32;
        (Just(s), Just((1..=k).collect::<Vec<u32>>()).prop_shuffle()).prop_map(|(mut s, perm)| {
            number(&mut s, &mut perm.into_iter());
            s
        })
    })
}
