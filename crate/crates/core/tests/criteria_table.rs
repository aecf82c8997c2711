use childnet_core::criteria::{advise, flag_duplication, CriteriaConfig, FlagKind};
use childnet_core::ingest::normalize_words;
use childnet_core::Ordno;

const LISTED: &[&str] = &[
    "a", "ah", "an", "awoh", "ay", "hey", "hmm", "huh", "ka", "ma", "mm", "mmhm", "oh", "oop",
    "oops", "ow", "s", "sh", "ssh", "ta", "uh", "uhhuh", "uhoh", "um", "whoops", "woo", "yum",
];
const SOUNDS: &[&str] = &["choo", "Moo", "Woof", "Bee"];

fn kinds(words: &[&str]) -> Vec<FlagKind> {
    advise(
        &normalize_words(words.iter().copied()),
        None,
        &CriteriaConfig::default(),
    )
    .into_iter()
    .map(|f| f.kind)
    .collect()
}

#[test]
fn every_listed_item_is_flagged() {
    for w in LISTED {
        let k = kinds(&["want", w, "car"]);
        assert!(!k.is_empty(), "{w} not flagged");
    }
}

#[test]
fn onomatopoeia_are_flagged() {
    for w in SOUNDS {
        assert!(
            kinds(&[w]).contains(&FlagKind::Onomatopoeia),
            "{w} not flagged"
        );
    }
    let k = kinds(&["I", "want", "ta", "write", "the", "choo", "choo", "train"]);
    assert!(k.contains(&FlagKind::Onomatopoeia));
    assert!(k.contains(&FlagKind::TaCandidate));
}

#[test]
fn ordinary_words_are_not_flagged() {
    assert!(kinds(&["telephone"]).is_empty());
    assert!(kinds(&["put", "in", "there"]).is_empty());
}

#[test]
fn duplication_examples() {
    let look = flag_duplication(&normalize_words(["Look", "at", "in", "there"]), None);
    assert_eq!(look.len(), 1);
    assert_eq!(look[0].exclude, [Ordno(3)]);

    let one = flag_duplication(&normalize_words(["One", "that", "screwdriver"]), None);
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].exclude, [Ordno(1)]);

    let get = flag_duplication(&normalize_words(["Get", "another", "one", "paper"]), None);
    assert_eq!(get.len(), 1);
    assert_eq!(get[0].exclude, [Ordno(3)]);
}

#[test]
fn discourse_and_lists() {
    assert!(kinds(&["ok", "Patsy"]).contains(&FlagKind::DiscourseItem));
    assert!(kinds(&["one", "two", "three"]).contains(&FlagKind::ListSequence));
}
