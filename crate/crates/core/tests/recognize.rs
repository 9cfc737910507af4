mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use riex::corpus::{Token, TokenSequence};
use riex::recognize::{
    build_gazetteer_recognizer, build_pattern_recognizer, merge_candidates, recognize_document,
    recognize_spans, PatternConfig, RecognizerKind, RecognizerSpec,
};

fn sequence(words: &[String]) -> TokenSequence {
    TokenSequence::new("d", words.iter().map(Token::new).collect())
}

fn words() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(
        prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(str::to_owned),
        0..=50,
    )
}

fn entries() -> impl Strategy<Value = Vec<Vec<String>>> {
    let tok = prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(str::to_owned);
    prop::collection::vec(prop::collection::vec(tok, 1..=3), 1..6)
}

fn gazetteer(name: &str, attribute: &str, entries: &[Vec<String>]) -> riex::recognize::Recognizer {
    let spec = RecognizerSpec::new(name, attribute, RecognizerKind::Gazetteer);
    build_gazetteer_recognizer(spec, entries.iter().map(|e| e.join(" "))).unwrap()
}

fn keys(c: &[riex::recognize::CandidateAnnotation]) -> HashSet<(String, usize, usize)> {
    c.iter().map(|a| (a.attribute.clone(), a.i, a.j)).collect()
}

#[test]
fn multiword_city_beats_its_prefix() {
    let rec = gazetteer(
        "g",
        "city",
        &[
            vec!["new".into()],
            vec!["new".into(), "york".into()],
            vec!["york".into()],
        ],
    );
    let words: Vec<String> = "in new york today".split(' ').map(str::to_owned).collect();
    let spans: Vec<_> = recognize_spans(&rec, &sequence(&words))
        .iter()
        .map(|c| (c.i, c.j))
        .collect();
    assert_eq!(spans, vec![(2, 3)]);
}

#[test]
fn age_pattern_over_text() {
    let spec = RecognizerSpec::new("ages", "age", RecognizerKind::Pattern);
    let rec = build_pattern_recognizer(spec, &PatternConfig::default_age()).unwrap();
    let words: Vec<String> = "im twenty - two and 23yo not 17 or 66 but 40"
        .split(' ')
        .map(str::to_owned)
        .collect();
    let got: Vec<_> = recognize_spans(&rec, &sequence(&words))
        .into_iter()
        .map(|c| c.surface)
        .collect();
    assert_eq!(got, vec!["twenty - two", "23yo", "40"]);
}

#[test]
fn merge_keeps_both_attributes_on_one_span() {
    let words: Vec<String> = vec!["paris".into()];
    let seq = sequence(&words);
    let a = gazetteer("cities", "city", &[vec!["paris".into()]]);
    let b = gazetteer("names", "name", &[vec!["paris".into()]]);
    let merged = recognize_document(&[a, b], &seq);
    assert_eq!(merged.len(), 2);
    assert_eq!(merged[0].attribute, "city");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gazetteer_is_leftmost_longest(doc in words(), entries in entries()) {
        let rec = gazetteer("g", "x", &entries);
        let set: HashSet<Vec<String>> = entries.iter().cloned().collect();
        let got: Vec<_> = recognize_spans(&rec, &sequence(&doc)).iter().map(|c| (c.i, c.j)).collect();
        prop_assert_eq!(got, common::leftmost_longest_oracle(&doc, &set));
    }

    #[test]
    fn every_span_satisfies_its_recognizer(doc in words(), entries in entries()) {
        let rec = gazetteer("g", "x", &entries);
        let seq = sequence(&doc);
        for c in recognize_spans(&rec, &seq) {
            prop_assert!(rec.matches(&seq, c.i, c.j));
            prop_assert!(c.is_valid_for(&seq));
        }
    }

    #[test]
    fn adding_recognizers_never_removes_candidates(
        doc in words(),
        first in entries(),
        second in entries(),
        same_attribute: bool,
    ) {
        let seq = sequence(&doc);
        let a = gazetteer("a", "x", &first);
        let b = gazetteer("b", if same_attribute { "x" } else { "y" }, &second);
        let alone = recognize_document(std::slice::from_ref(&a), &seq);
        let both = recognize_document(&[a, b], &seq);
        prop_assert!(keys(&alone).is_subset(&keys(&both)));
    }

    #[test]
    fn merge_is_deduplicated_and_sorted(doc in words(), first in entries(), second in entries()) {
        let seq = sequence(&doc);
        let a = recognize_spans(&gazetteer("a", "x", &first), &seq);
        let b = recognize_spans(&gazetteer("b", "x", &second), &seq);
        let merged = merge_candidates([a.clone(), b]);
        prop_assert_eq!(keys(&merged).len(), merged.len());
        prop_assert!(merged.windows(2).all(|w| (w[0].i, w[0].j) <= (w[1].i, w[1].j)));
        // First proposal wins.
        for c in &a {
            let kept = merged.iter().find(|m| (m.i, m.j) == (c.i, c.j)).unwrap();
            prop_assert_eq!(&kept.recognizer, "a");
        }
    }
}
