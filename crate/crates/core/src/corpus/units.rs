use serde::{Deserialize, Serialize};

use super::{CorpusStats, Token, TokenSequence};

/// Compound-unit class of a token. Every token belongs to exactly one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitClass {
    Plain,
    HighIdfUnits,
    PureNumUnits,
    AlphaNumUnits,
    PurePunctUnits,
    AlphaPunctUnits,
    NonasciiUnicodeUnits,
}

impl UnitClass {
    pub const COMPOUND: [UnitClass; 6] = [
        UnitClass::HighIdfUnits,
        UnitClass::PureNumUnits,
        UnitClass::AlphaNumUnits,
        UnitClass::PurePunctUnits,
        UnitClass::AlphaPunctUnits,
        UnitClass::NonasciiUnicodeUnits,
    ];

    /// Placeholder that replaces every member of a compound class. Each
    /// symbol mixes letters with non-alphanumeric brackets, which the
    /// tokenizer always splits apart, so no real token can equal one.
    pub fn symbol(self) -> Option<&'static str> {
        match self {
            UnitClass::Plain => None,
            UnitClass::HighIdfUnits => Some("\u{27e8}HIGH-IDF\u{27e9}"),
            UnitClass::PureNumUnits => Some("\u{27e8}NUM\u{27e9}"),
            UnitClass::AlphaNumUnits => Some("\u{27e8}ALNUM\u{27e9}"),
            UnitClass::PurePunctUnits => Some("\u{27e8}PUNCT\u{27e9}"),
            UnitClass::AlphaPunctUnits => Some("\u{27e8}ALPHA-PUNCT\u{27e9}"),
            UnitClass::NonasciiUnicodeUnits => Some("\u{27e8}NONASCII\u{27e9}"),
        }
    }

    pub fn is_symbol(canon: &str) -> bool {
        Self::COMPOUND.iter().any(|c| c.symbol() == Some(canon))
    }
}

#[derive(Default)]
struct Shape {
    alpha: bool,
    numeric: bool,
    ascii_punct: bool,
    all_numeric: bool,
    all_alphanumeric: bool,
    all_ascii_punct: bool,
    all_non_ascii: bool,
}

fn shape(s: &str) -> Shape {
    let mut shape = Shape {
        all_numeric: true,
        all_alphanumeric: true,
        all_ascii_punct: true,
        all_non_ascii: true,
        ..Shape::default()
    };
    for c in s.chars() {
        let alpha = c.is_alphabetic();
        let numeric = c.is_numeric();
        let punct = c.is_ascii_punctuation();
        shape.alpha |= alpha;
        shape.numeric |= numeric;
        shape.ascii_punct |= punct;
        shape.all_numeric &= numeric;
        shape.all_alphanumeric &= alpha || numeric;
        shape.all_ascii_punct &= punct;
        shape.all_non_ascii &= !c.is_ascii();
    }
    shape
}

/// Structural classes are tested first (numeric, alphanumeric, punctuation,
/// alpha-punctuation, non-ASCII); the corpus-dependent rare-unit test applies
/// only to tokens none of them claims. Compound symbols are always plain.
pub fn classify_token(tok: &Token, stats: &CorpusStats) -> UnitClass {
    classify_canon(&tok.canon, stats)
}

pub(crate) fn classify_canon(canon: &str, stats: &CorpusStats) -> UnitClass {
    if canon.is_empty() || UnitClass::is_symbol(canon) {
        return UnitClass::Plain;
    }
    let s = shape(canon);
    if s.all_numeric {
        UnitClass::PureNumUnits
    } else if s.all_alphanumeric && s.alpha && s.numeric {
        UnitClass::AlphaNumUnits
    } else if s.all_ascii_punct {
        UnitClass::PurePunctUnits
    } else if s.alpha && s.ascii_punct {
        UnitClass::AlphaPunctUnits
    } else if s.all_non_ascii {
        UnitClass::NonasciiUnicodeUnits
    } else if stats.is_rare(canon) {
        UnitClass::HighIdfUnits
    } else {
        UnitClass::Plain
    }
}

/// Replaces the canon form of every compound-class token by its class symbol.
/// Surfaces and sequence length are preserved.
pub fn normalize_sequence(seq: &TokenSequence, stats: &CorpusStats) -> TokenSequence {
    let tokens = seq
        .tokens
        .iter()
        .map(|tok| match classify_token(tok, stats).symbol() {
            Some(symbol) => Token {
                surface: tok.surface.clone(),
                canon: symbol.to_owned(),
            },
            None => tok.clone(),
        })
        .collect();
    TokenSequence::new(seq.doc_id.clone(), tokens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{compute_corpus_stats, tokenize, Document};
    use proptest::prelude::*;

    fn stats_with(common: &[&str], docs: usize) -> CorpusStats {
        let line = common.join(" ");
        let docs: Vec<Document> = (0..docs)
            .map(|i| Document::text(i.to_string(), line.clone()))
            .collect();
        let mut stats = compute_corpus_stats(docs, 0.01).unwrap();
        stats.freeze();
        stats
    }

    fn class(s: &str, stats: &CorpusStats) -> UnitClass {
        classify_canon(s, stats)
    }

    #[test]
    fn table_classes() {
        let stats = stats_with(&["call", "now"], 10);
        assert_eq!(class("21", &stats), UnitClass::PureNumUnits);
        assert_eq!(class("b4u", &stats), UnitClass::AlphaNumUnits);
        assert_eq!(class("???", &stats), UnitClass::PurePunctUnits);
        assert_eq!(class("b4u!", &stats), UnitClass::AlphaPunctUnits);
        assert_eq!(class("o'neil", &stats), UnitClass::AlphaPunctUnits);
        assert_eq!(
            class("\u{2665}\u{2665}\u{2665}", &stats),
            UnitClass::NonasciiUnicodeUnits
        );
        assert_eq!(class("call", &stats), UnitClass::Plain);
    }

    #[test]
    fn rare_word_is_high_idf() {
        let mut raws: Vec<Document> = (0..9999)
            .map(|i| Document::text(i.to_string(), "common"))
            .collect();
        raws.push(Document::text("last", "common zzzxq"));
        let mut stats = compute_corpus_stats(raws, 0.01).unwrap();
        stats.freeze();
        assert_eq!(class("zzzxq", &stats), UnitClass::HighIdfUnits);
        assert_eq!(class("common", &stats), UnitClass::Plain);
    }

    #[test]
    fn structural_classes_win_over_rarity() {
        let stats = stats_with(&["common"], 200);
        assert!(stats.is_rare("555"));
        assert_eq!(class("555", &stats), UnitClass::PureNumUnits);
    }

    #[test]
    fn normalize_substitutes_numbers() {
        let stats = stats_with(&["call", "now"], 10);
        let seq = tokenize(&Document::text("d", "call 555 now"));
        let out = normalize_sequence(&seq, &stats);
        assert_eq!(out.canons(), ["call", "\u{27e8}NUM\u{27e9}", "now"]);
        assert_eq!(out.tokens[1].surface, "555");
    }

    #[test]
    fn normalize_plain_is_identity() {
        let stats = stats_with(&["call", "now"], 10);
        let seq = tokenize(&Document::text("d", "call now call"));
        assert_eq!(normalize_sequence(&seq, &stats), seq);
    }

    #[test]
    fn normalize_rare_obfuscated_city() {
        let stats = stats_with(&["hey", "gentleman", "im"], 200);
        let seq = tokenize(&Document::text("d", "Hey gentleman im neWYOrk"));
        let out = normalize_sequence(&seq, &stats);
        assert_eq!(
            out.canons(),
            ["hey", "gentleman", "im", "\u{27e8}HIGH-IDF\u{27e9}"]
        );
        assert_eq!(out.tokens[3].surface, "neWYOrk");
    }

    #[test]
    fn symbols_never_produced_by_tokenizer() {
        for class in UnitClass::COMPOUND {
            let symbol = class.symbol().unwrap();
            let toks = tokenize(&Document::text("d", symbol));
            assert!(toks.len() > 1, "{symbol} survived tokenization");
            assert_eq!(
                classify_canon(symbol, &stats_with(&["x"], 1000)),
                UnitClass::Plain
            );
        }
    }

    proptest! {
        #[test]
        fn classification_is_total_and_exclusive(s in "\\PC{1,12}") {
            let stats = stats_with(&["a"], 10);
            let canon = s.to_lowercase();
            let c = classify_canon(&canon, &stats);
            let sh = shape(&canon);
            // Count structural predicates that hold; the reported class must be the first one.
            let preds = [
                (UnitClass::PureNumUnits, sh.all_numeric),
                (UnitClass::AlphaNumUnits, sh.all_alphanumeric && sh.alpha && sh.numeric),
                (UnitClass::PurePunctUnits, sh.all_ascii_punct),
                (UnitClass::AlphaPunctUnits, sh.alpha && sh.ascii_punct),
                (UnitClass::NonasciiUnicodeUnits, sh.all_non_ascii),
            ];
            if UnitClass::is_symbol(&canon) {
                prop_assert_eq!(c, UnitClass::Plain);
            } else if let Some((first, _)) = preds.iter().find(|(_, p)| *p) {
                prop_assert_eq!(c, *first);
            } else {
                prop_assert!(matches!(c, UnitClass::HighIdfUnits | UnitClass::Plain));
            }
        }

        #[test]
        fn normalization_is_idempotent(raw in "[a-z0-9!?\u{2665} ]{0,40}") {
            let stats = stats_with(&["a", "b"], 50);
            let seq = tokenize(&Document::text("d", raw));
            let once = normalize_sequence(&seq, &stats);
            prop_assert_eq!(once.len(), seq.len());
            prop_assert_eq!(normalize_sequence(&once, &stats), once);
        }
    }
}
