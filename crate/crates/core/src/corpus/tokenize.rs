use super::{Document, Token, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Space,
    Word,
    Symbol,
}

fn char_class(c: char) -> CharClass {
    if c.is_whitespace() {
        CharClass::Space
    } else if c.is_alphanumeric() {
        CharClass::Word
    } else {
        CharClass::Symbol
    }
}

/// Splits on whitespace, then at every boundary between letter/digit runs and
/// punctuation/symbol runs. "b4u" stays whole; "city/shreveport" is three tokens.
pub fn tokenize(doc: &Document) -> TokenSequence {
    TokenSequence::new(doc.doc_id.clone(), tokenize_str(&doc.raw))
}

pub(crate) fn tokenize_str(raw: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut start = 0;
    let mut current = CharClass::Space;
    for (idx, c) in raw.char_indices() {
        let class = char_class(c);
        if class != current {
            if current != CharClass::Space {
                tokens.push(Token::new(&raw[start..idx]));
            }
            start = idx;
            current = class;
        }
    }
    if current != CharClass::Space {
        tokens.push(Token::new(&raw[start..]));
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canons(raw: &str) -> Vec<String> {
        tokenize_str(raw).into_iter().map(|t| t.canon).collect()
    }

    #[test]
    fn location_line() {
        assert_eq!(
            canons("Location: Bossier City/Shreveport"),
            ["location", ":", "bossier", "city", "/", "shreveport"]
        );
    }

    #[test]
    fn empty_input() {
        assert!(canons("").is_empty());
        assert!(canons(" \t\n ").is_empty());
    }

    #[test]
    fn plain_sentence() {
        assert_eq!(
            canons("the cow jumped over the moon"),
            ["the", "cow", "jumped", "over", "the", "moon"]
        );
    }

    #[test]
    fn mixed_runs() {
        assert_eq!(canons("b4u"), ["b4u"]);
        assert_eq!(canons("AVAILABLE NOW!!"), ["available", "now", "!!"]);
        assert_eq!(canons("(4 two 4)"), ["(", "4", "two", "4", ")"]);
        assert_eq!(
            canons("\u{2665}\u{2665}\u{2665}"),
            ["\u{2665}\u{2665}\u{2665}"]
        );
        assert_eq!(canons("twenty-one"), ["twenty", "-", "one"]);
    }

    #[test]
    fn surface_keeps_case() {
        let toks = tokenize_str("neWYOrk");
        assert_eq!(toks[0].surface, "neWYOrk");
        assert_eq!(toks[0].canon, "newyork");
    }

    proptest! {
        #[test]
        fn surfaces_reconstruct_non_whitespace(raw in "\\PC{0,64}") {
            let toks = tokenize_str(&raw);
            let joined: String = toks.iter().map(|t| t.surface.as_str()).collect();
            let expected: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(joined, expected);
            for t in &toks {
                prop_assert!(!t.surface.is_empty());
                prop_assert!(!t.canon.is_empty());
                prop_assert_eq!(&t.canon, &t.surface.to_lowercase());
            }
            prop_assert_eq!(toks, tokenize_str(&raw));
        }
    }
}
