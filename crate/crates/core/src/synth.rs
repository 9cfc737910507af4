//! Synthetic corpora with planted attribute occurrences and gold labels.
//!
//! Every planted value sits inside a context template. Positive templates
//! and context words differ from negative ones with probability `margin`;
//! otherwise both draw from a shared pool, so `margin` dials task
//! difficulty from trivially separable (1.0) to indistinguishable (0.0).
//! Filler and context words are pseudo-words guaranteed disjoint from every
//! gazetteer token, so recognizers fire exactly on the planted spans.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::tokenize::tokenize_str;
use crate::corpus::{write_corpus, Document};
use crate::recognize::{
    build_gazetteer_recognizer, build_pattern_recognizer, span_surface, write_candidates,
    CandidateAnnotation, Label, PatternConfig, Recognizer, RecognizerKind, RecognizerSpec,
    RegistryEntry, RegistryFile,
};
use crate::seed;
use crate::{Error, Result};

const BUNDLED_CITIES: &str = include_str!("../data/gazetteers/cities.txt");

const NUMBER_WORDS: [&str; 28] = [
    "zero",
    "one",
    "two",
    "three",
    "four",
    "five",
    "six",
    "seven",
    "eight",
    "nine",
    "ten",
    "eleven",
    "twelve",
    "thirteen",
    "fourteen",
    "fifteen",
    "sixteen",
    "seventeen",
    "eighteen",
    "nineteen",
    "twenty",
    "thirty",
    "forty",
    "fourty",
    "fifty",
    "sixty",
    "seventy",
    "hundred",
];

const OBFUSCATED: [&str; 14] = [
    "b4u",
    "2nite",
    "l8r",
    "4u",
    "gr8",
    "\u{2665}",
    "\u{2665}\u{2665}",
    "\u{2605}",
    "\u{1f48b}",
    "!!",
    "***",
    "...",
    "??",
    "~",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthRecognizer {
    /// Emit a word list of all surfaces plus distractors.
    Gazetteer,
    /// Emit the bundled age pattern configuration.
    Age,
}

/// Template placeholders: `{X}` is the planted value, `{C}` a context word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthAttribute {
    pub name: String,
    pub recognizer: SynthRecognizer,
    pub surfaces: Vec<String>,
    /// Gazetteer entries that are never planted.
    pub distractors: Vec<String>,
    pub positive_patterns: Vec<String>,
    pub negative_patterns: Vec<String>,
    pub shared_patterns: Vec<String>,
    /// Probability that a planted occurrence is a correct instance.
    pub positive_rate: f64,
    /// Planted occurrences per document.
    pub plants_per_doc: usize,
}

impl SynthAttribute {
    pub fn recognizer_name(&self) -> String {
        match self.recognizer {
            SynthRecognizer::Gazetteer => format!("synth-{}-gazetteer", self.name),
            SynthRecognizer::Age => format!("synth-{}-pattern", self.name),
        }
    }

    /// City values in location-like contexts versus adjective-like ones.
    pub fn city() -> Self {
        let names: Vec<String> = BUNDLED_CITIES
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .filter(|l| l.chars().all(|c| c.is_ascii_alphabetic() || c == ' '))
            .filter(|l| !l.to_lowercase().split(' ').any(|w| w == "the"))
            .map(str::to_owned)
            .collect();
        Self {
            name: "city".into(),
            recognizer: SynthRecognizer::Gazetteer,
            surfaces: names[..40].to_vec(),
            distractors: names[40..140].to_vec(),
            positive_patterns: strings(&[
                "location : {X} {C}",
                "{C} in {X} {C}",
                "{C} from {X} , {C}",
            ]),
            negative_patterns: strings(&["{C} so {X} {C}", "{C} {C} {X} !", "very {X} {C} {C}"]),
            shared_patterns: strings(&["{C} {X} {C}"]),
            positive_rate: 0.3,
            plants_per_doc: 1,
        }
    }

    /// Integer ages 18 to 65 next to age cues versus prices and counts.
    pub fn age() -> Self {
        Self {
            name: "age".into(),
            recognizer: SynthRecognizer::Age,
            surfaces: (18..=65).map(|n: u32| n.to_string()).collect(),
            distractors: Vec::new(),
            positive_patterns: strings(&[
                "age : {X} {C}",
                "{C} im {X} years old",
                "{C} {X} yo {C}",
            ]),
            negative_patterns: strings(&["{C} $ {X} {C}", "{X} roses {C} {C}", "{C} call {C} {X}"]),
            shared_patterns: strings(&["{C} {X} {C}"]),
            positive_rate: 0.3,
            plants_per_doc: 1,
        }
    }
}

fn strings(s: &[&str]) -> Vec<String> {
    s.iter().map(|x| (*x).to_owned()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_docs: usize,
    /// Target length of every document, plants included.
    pub tokens_per_doc: usize,
    pub plain_vocab: usize,
    /// Per-token probability of emitting a fresh, never-repeated word.
    pub rare_rate: f64,
    /// Largest pure-number filler value (values start at 100).
    pub numeric_vocab: usize,
    /// Context words per polarity pool and in the shared pool.
    pub context_pool: usize,
    pub attributes: Vec<SynthAttribute>,
    /// Probability of flipping a gold label.
    pub noise_rate: f64,
    /// Per-token probability of replacing filler with an obfuscated token.
    pub obfuscation_rate: f64,
    pub margin: f64,
    pub seed: u64,
}

impl SynthSpec {
    /// Disjoint positive and negative contexts for city and age.
    pub fn high_margin(n_docs: usize, seed: u64) -> Self {
        Self {
            n_docs,
            tokens_per_doc: 40,
            plain_vocab: 300,
            rare_rate: 0.01,
            numeric_vocab: 100_000,
            context_pool: 12,
            attributes: vec![SynthAttribute::city(), SynthAttribute::age()],
            noise_rate: 0.0,
            obfuscation_rate: 0.05,
            margin: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, rate) in [
            ("rare_rate", self.rare_rate),
            ("noise_rate", self.noise_rate),
            ("obfuscation_rate", self.obfuscation_rate),
            ("margin", self.margin),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return bad(format!("{name} must lie in [0, 1], got {rate}"));
            }
        }
        if self.n_docs == 0
            || self.tokens_per_doc == 0
            || self.plain_vocab == 0
            || self.context_pool == 0
        {
            return bad(
                "document count, length, vocabulary and pool sizes must be positive".into(),
            );
        }
        if self.numeric_vocab < 100 {
            return bad("numeric_vocab must be at least 100".into());
        }
        let mut names = HashSet::new();
        for a in &self.attributes {
            if !names.insert(&a.name) {
                return bad(format!("duplicate attribute {:?}", a.name));
            }
            if a.surfaces.is_empty() {
                return bad(format!("attribute {:?} has no surfaces", a.name));
            }
            if a.positive_patterns.is_empty()
                || a.negative_patterns.is_empty()
                || a.shared_patterns.is_empty()
            {
                return bad(format!(
                    "attribute {:?} needs positive, negative and shared patterns",
                    a.name
                ));
            }
            if !(0.0..=1.0).contains(&a.positive_rate) {
                return bad(format!("positive_rate of {:?} outside [0, 1]", a.name));
            }
            let all = a
                .positive_patterns
                .iter()
                .chain(&a.negative_patterns)
                .chain(&a.shared_patterns);
            for p in all {
                if p.matches("{X}").count() != 1 {
                    return bad(format!("pattern {p:?} must contain {{X}} exactly once"));
                }
            }
            if a.recognizer == SynthRecognizer::Age {
                let ages = PatternConfig::default_age();
                let range = ages.numeric_ranges[0];
                if !a.surfaces.iter().all(|s| {
                    s.parse::<u64>()
                        .is_ok_and(|n| (range.min..=range.max).contains(&n))
                }) {
                    return bad(format!(
                        "age surfaces of {:?} must be integers in {}..={}",
                        a.name, range.min, range.max
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Output of [`generate_corpus`].
#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub documents: Vec<Document>,
    pub labels: Vec<CandidateAnnotation>,
    /// (attribute, entries); written to `gazetteers/<attribute>.txt`.
    pub gazetteers: Vec<(String, Vec<String>)>,
    /// (attribute, config); written to `patterns/<attribute>.json`.
    pub patterns: Vec<(String, PatternConfig)>,
    pub registry: RegistryFile,
}

impl SynthCorpus {
    pub fn recognizers(&self) -> Result<Vec<Recognizer>> {
        let mut out = Vec::new();
        for entry in &self.registry.recognizers {
            let spec = RecognizerSpec {
                name: entry.name.clone(),
                attribute: entry.attribute.clone(),
                kind: entry.kind,
                source: Some(entry.source.clone()),
                expected_recall: entry.expected_recall,
            };
            let rec = match entry.kind {
                RecognizerKind::Gazetteer => {
                    let (_, entries) = self
                        .gazetteers
                        .iter()
                        .find(|(a, _)| *a == entry.attribute)
                        .unwrap();
                    build_gazetteer_recognizer(spec, entries)?
                }
                RecognizerKind::Pattern => {
                    let (_, cfg) = self
                        .patterns
                        .iter()
                        .find(|(a, _)| *a == entry.attribute)
                        .unwrap();
                    build_pattern_recognizer(spec, cfg)?
                }
            };
            out.push(rec);
        }
        Ok(out)
    }

    /// Writes `corpus.jsonl`, `labels.jsonl`, `recognizers.json` and the
    /// gazetteer and pattern files under `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir.join("gazetteers"))?;
        std::fs::create_dir_all(dir.join("patterns"))?;
        write_corpus(dir.join("corpus.jsonl"), &self.documents)?;
        write_candidates(dir.join("labels.jsonl"), &self.labels)?;
        for (attr, entries) in &self.gazetteers {
            let mut text = format!("# synthetic {attr} gazetteer\n");
            for e in entries {
                text.push_str(e);
                text.push('\n');
            }
            std::fs::write(dir.join("gazetteers").join(format!("{attr}.txt")), text)?;
        }
        for (attr, cfg) in &self.patterns {
            cfg.save(dir.join("patterns").join(format!("{attr}.json")))?;
        }
        self.registry.save(dir.join("recognizers.json"))
    }

    pub fn token_count(&self) -> usize {
        self.documents
            .iter()
            .map(|d| tokenize_str(&d.raw).len())
            .sum()
    }
}

struct Pools {
    filler: Vec<String>,
    /// Per attribute: (positive, negative, shared) context words.
    context: Vec<[Vec<String>; 3]>,
}

fn pseudo_word(rng: &mut ChaCha8Rng) -> String {
    const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
    const VOWELS: &[u8] = b"aeiou";
    let syllables = rng.gen_range(2..=3);
    let mut w = String::new();
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.gen_range(0..CONSONANTS.len())] as char);
        w.push(VOWELS[rng.gen_range(0..VOWELS.len())] as char);
    }
    w
}

fn build_pools(spec: &SynthSpec) -> Pools {
    let mut forbidden: HashSet<String> = NUMBER_WORDS.iter().map(|s| (*s).to_owned()).collect();
    for a in &spec.attributes {
        let texts = a
            .surfaces
            .iter()
            .chain(&a.distractors)
            .chain(&a.positive_patterns)
            .chain(&a.negative_patterns)
            .chain(&a.shared_patterns);
        for t in texts {
            forbidden.extend(tokenize_str(t).into_iter().map(|t| t.canon));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(spec.seed, u64::MAX));
    let mut fresh = |count: usize| {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let w = pseudo_word(&mut rng);
            if forbidden.insert(w.clone()) {
                out.push(w);
            }
        }
        out
    };
    let filler = fresh(spec.plain_vocab);
    let context = spec
        .attributes
        .iter()
        .map(|_| {
            [
                fresh(spec.context_pool),
                fresh(spec.context_pool),
                fresh(spec.context_pool),
            ]
        })
        .collect();
    Pools { filler, context }
}

fn rare_word(counter: u64) -> String {
    // Pseudo-words never contain 'x', so these cannot collide with them.
    let mut w = String::from("x");
    let mut n = counter;
    loop {
        w.push((b'a' + (n % 26) as u8) as char);
        n /= 26;
        if n == 0 {
            break;
        }
    }
    w
}

struct Plant {
    text: String,
    /// Token offsets of the value within the plant, 0-indexed inclusive.
    value: (usize, usize),
    tokens: usize,
    attribute: usize,
    correct: bool,
}

fn make_plant(spec: &SynthSpec, pools: &Pools, attr_idx: usize, rng: &mut ChaCha8Rng) -> Plant {
    let attr = &spec.attributes[attr_idx];
    let correct = rng.gen_bool(attr.positive_rate);
    let specific = rng.gen_bool(spec.margin);
    let patterns = match (specific, correct) {
        (false, _) => &attr.shared_patterns,
        (true, true) => &attr.positive_patterns,
        (true, false) => &attr.negative_patterns,
    };
    let pattern = patterns.choose(rng).unwrap();
    let value = attr.surfaces.choose(rng).unwrap();
    let [pos_pool, neg_pool, shared_pool] = &pools.context[attr_idx];
    let mut words = Vec::new();
    let mut offset = 0;
    let mut span = (0, 0);
    for piece in pattern.split(' ') {
        let text = match piece {
            "{X}" => value.clone(),
            "{C}" => {
                let pool = if rng.gen_bool(spec.margin) {
                    if correct {
                        pos_pool
                    } else {
                        neg_pool
                    }
                } else {
                    shared_pool
                };
                pool.choose(rng).unwrap().clone()
            }
            literal => literal.to_owned(),
        };
        let n = tokenize_str(&text).len();
        if piece == "{X}" {
            span = (offset, offset + n - 1);
        }
        offset += n;
        words.push(text);
    }
    Plant {
        text: words.join(" "),
        value: span,
        tokens: offset,
        attribute: attr_idx,
        correct,
    }
}

fn filler_token(
    spec: &SynthSpec,
    pools: &Pools,
    rng: &mut ChaCha8Rng,
    doc: usize,
    rare: &mut u64,
) -> String {
    if rng.gen_bool(spec.obfuscation_rate) {
        if rng.gen_bool(0.5) {
            return rng.gen_range(100..=spec.numeric_vocab).to_string();
        }
        return OBFUSCATED.choose(rng).unwrap().to_string();
    }
    if rng.gen_bool(spec.rare_rate) {
        *rare += 1;
        return rare_word(((doc as u64) << 20) | *rare);
    }
    pools.filler.choose(rng).unwrap().clone()
}

/// Generates a corpus, its gold labels and matching recognizer files.
/// Document `n` depends only on the spec and `n`, so a corpus with more
/// documents extends one with fewer.
pub fn generate_corpus(spec: &SynthSpec) -> Result<SynthCorpus> {
    spec.validate()?;
    let pools = build_pools(spec);
    let mut documents = Vec::with_capacity(spec.n_docs);
    let mut labels = Vec::new();
    for d in 0..spec.n_docs {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(spec.seed, d as u64));
        let doc_id = format!("doc-{d:06}");
        let mut plants: Vec<Plant> = Vec::new();
        for a in 0..spec.attributes.len() {
            for _ in 0..spec.attributes[a].plants_per_doc {
                plants.push(make_plant(spec, &pools, a, &mut rng));
            }
        }
        plants.shuffle(&mut rng);
        let planted: usize = plants.iter().map(|p| p.tokens).sum();
        let filler_len = spec
            .tokens_per_doc
            .saturating_sub(planted)
            .max(plants.len().saturating_sub(1));
        // Distinct slots keep at least one filler token between plants.
        let mut slots = index::sample(&mut rng, filler_len + 1, plants.len()).into_vec();
        slots.sort_unstable();

        let mut rare = 0u64;
        let mut words: Vec<String> = Vec::new();
        let mut position = 0usize;
        let mut next_plant = 0usize;
        for slot in 0..=filler_len {
            while next_plant < plants.len() && slots[next_plant] == slot {
                let plant = &plants[next_plant];
                let attr = &spec.attributes[plant.attribute];
                let (i, j) = (position + plant.value.0 + 1, position + plant.value.1 + 1);
                let flipped = rng.gen_bool(spec.noise_rate);
                let label = if plant.correct != flipped {
                    Label::Correct
                } else {
                    Label::Incorrect
                };
                let value_tokens = tokenize_str(&plant.text);
                labels.push(CandidateAnnotation {
                    doc_id: doc_id.clone(),
                    attribute: attr.name.clone(),
                    i,
                    j,
                    surface: span_surface(&value_tokens[plant.value.0..=plant.value.1]),
                    recognizer: attr.recognizer_name(),
                    label,
                });
                words.push(plant.text.clone());
                position += plant.tokens;
                next_plant += 1;
            }
            if slot < filler_len {
                words.push(filler_token(spec, &pools, &mut rng, d, &mut rare));
                position += 1;
            }
        }
        documents.push(Document::text(doc_id, words.join(" ")));
    }
    labels.sort_by(|a, b| {
        (&a.doc_id, a.i, a.j, &a.attribute).cmp(&(&b.doc_id, b.i, b.j, &b.attribute))
    });

    let mut gazetteers = Vec::new();
    let mut patterns = Vec::new();
    let mut registry = RegistryFile::default();
    for a in &spec.attributes {
        let (kind, source) = match a.recognizer {
            SynthRecognizer::Gazetteer => {
                let mut entries = a.surfaces.clone();
                entries.extend(a.distractors.iter().cloned());
                gazetteers.push((a.name.clone(), entries));
                (
                    RecognizerKind::Gazetteer,
                    format!("gazetteers/{}.txt", a.name),
                )
            }
            SynthRecognizer::Age => {
                let mut cfg = PatternConfig::default_age();
                cfg.name = a.recognizer_name();
                cfg.attribute = a.name.clone();
                patterns.push((a.name.clone(), cfg));
                (RecognizerKind::Pattern, format!("patterns/{}.json", a.name))
            }
        };
        registry.recognizers.push(RegistryEntry {
            name: a.recognizer_name(),
            attribute: a.name.clone(),
            kind,
            source: source.into(),
            expected_recall: Some(1.0),
        });
    }
    Ok(SynthCorpus {
        documents,
        labels,
        gazetteers,
        patterns,
        registry,
    })
}

/// Uniform random token stream for timing experiments: a vocabulary of
/// `vocab` pseudo-words and documents of `doc_len` ids totalling `n_tokens`.
pub fn token_stream(
    n_tokens: usize,
    vocab: usize,
    doc_len: usize,
    seed: u64,
) -> (Vec<String>, Vec<Vec<u32>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut words = Vec::with_capacity(vocab);
    while words.len() < vocab {
        let w = format!("{}{}", pseudo_word(&mut rng), pseudo_word(&mut rng));
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    let doc_len = doc_len.max(1);
    let mut docs = Vec::with_capacity(n_tokens / doc_len + 1);
    let mut remaining = n_tokens;
    while remaining > 0 {
        let len = doc_len.min(remaining);
        docs.push((0..len).map(|_| rng.gen_range(0..vocab as u32)).collect());
        remaining -= len;
    }
    (words, docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use crate::recognize::recognize_document;

    fn small(n: usize) -> SynthSpec {
        SynthSpec::high_margin(n, 42)
    }

    #[test]
    fn gold_spans_equal_recognizer_output() {
        let corpus = generate_corpus(&small(100)).unwrap();
        let recognizers = corpus.recognizers().unwrap();
        let mut found = Vec::new();
        for doc in &corpus.documents {
            found.extend(recognize_document(&recognizers, &tokenize(doc)));
        }
        let key = |c: &CandidateAnnotation| {
            (
                c.doc_id.clone(),
                c.attribute.clone(),
                c.i,
                c.j,
                c.surface.clone(),
            )
        };
        let mut gold: Vec<_> = corpus.labels.iter().map(key).collect();
        let mut got: Vec<_> = found.iter().map(key).collect();
        gold.sort();
        got.sort();
        assert_eq!(gold.len(), 200);
        assert_eq!(got, gold);
    }

    #[test]
    fn deterministic() {
        let a = generate_corpus(&small(50)).unwrap();
        let b = generate_corpus(&small(50)).unwrap();
        assert_eq!(a, b);
        let c = generate_corpus(&SynthSpec {
            seed: 43,
            ..small(50)
        })
        .unwrap();
        assert_ne!(a.documents, c.documents);
    }

    #[test]
    fn larger_corpus_extends_smaller() {
        let a = generate_corpus(&small(20)).unwrap();
        let b = generate_corpus(&small(60)).unwrap();
        assert_eq!(a.documents[..], b.documents[..20]);
        let prefix: Vec<_> = b
            .labels
            .iter()
            .filter(|l| l.doc_id.as_str() < "doc-000020")
            .cloned()
            .collect();
        assert_eq!(prefix, a.labels);
    }

    #[test]
    fn token_target_within_one_percent() {
        let spec = small(200);
        let corpus = generate_corpus(&spec).unwrap();
        let target = (spec.n_docs * spec.tokens_per_doc) as f64;
        let got = corpus.token_count() as f64;
        assert!((got - target).abs() / target <= 0.01, "{got} vs {target}");
    }

    #[test]
    fn label_skew_and_noise() {
        let clean = generate_corpus(&small(300)).unwrap();
        let pos = clean
            .labels
            .iter()
            .filter(|l| l.label == Label::Correct)
            .count();
        assert!(pos > 100 && pos < 260, "{pos}");
        let noisy = generate_corpus(&SynthSpec {
            noise_rate: 1.0,
            ..small(300)
        })
        .unwrap();
        let flipped = noisy
            .labels
            .iter()
            .filter(|l| l.label == Label::Correct)
            .count();
        assert_eq!(flipped, clean.labels.len() - pos);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(generate_corpus(&SynthSpec {
            margin: 2.0,
            ..small(10)
        })
        .is_err());
        assert!(generate_corpus(&SynthSpec {
            n_docs: 0,
            ..small(10)
        })
        .is_err());
        let mut spec = small(10);
        spec.attributes[0].negative_patterns.clear();
        assert!(generate_corpus(&spec).is_err());
        let mut spec = small(10);
        spec.attributes[0].positive_patterns = vec!["no placeholder".into()];
        assert!(generate_corpus(&spec).is_err());
        let mut spec = small(10);
        spec.attributes[1].surfaces = vec!["99".into()];
        assert!(generate_corpus(&spec).is_err());
    }

    #[test]
    fn writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = generate_corpus(&small(10)).unwrap();
        corpus.write(dir.path()).unwrap();
        let recs = crate::recognize::load_registry(dir.path().join("recognizers.json")).unwrap();
        assert_eq!(recs.len(), 2);
        let back = crate::corpus::read_corpus(dir.path().join("corpus.jsonl")).unwrap();
        assert_eq!(back, corpus.documents);
    }

    #[test]
    fn stream_sizes() {
        let (vocab, docs) = token_stream(1005, 50, 100, 1);
        assert_eq!(vocab.len(), 50);
        assert_eq!(docs.iter().map(Vec::len).sum::<usize>(), 1005);
        assert_eq!(docs.len(), 11);
    }
}
