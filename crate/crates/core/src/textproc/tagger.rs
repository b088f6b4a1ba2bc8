//! Tokenization and coarse part-of-speech tagging.

use std::collections::HashSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Tag {
    Noun,
    Adj,
    Other,
}

impl Tag {
    /// Accepts the coarse labels `NOUN` / `ADJ` / `OTHER` as well as Penn
    /// Treebank tags (`NN*` and `JJ*` map to nouns and adjectives).
    pub fn from_label(label: &str) -> Tag {
        let upper = label.trim().to_ascii_uppercase();
        match upper.as_str() {
            "NOUN" | "PROPN" => Tag::Noun,
            "ADJ" => Tag::Adj,
            _ if upper.starts_with("NN") => Tag::Noun,
            _ if upper.starts_with("JJ") => Tag::Adj,
            _ => Tag::Other,
        }
    }

    pub fn is_candidate(self) -> bool {
        matches!(self, Tag::Noun | Tag::Adj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedToken {
    pub surface: String,
    pub tag: Tag,
}

impl TaggedToken {
    pub fn new(surface: impl Into<String>, tag: Tag) -> Self {
        TaggedToken {
            surface: surface.into(),
            tag,
        }
    }
}

/// Splits text into word tokens: maximal runs of alphanumeric characters and
/// hyphens, with hyphens removed ("semi-automatic" becomes "semiautomatic").
/// Runs without a letter (pure numbers, stray dashes) are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut flush = |current: &mut String| {
        if current.chars().any(char::is_alphabetic) {
            tokens.push(std::mem::take(current));
        } else {
            current.clear();
        }
    };
    for c in text.chars() {
        if c.is_alphanumeric() {
            current.push(c);
        } else if is_hyphen(c) && !current.is_empty() {
            // joined; the hyphen itself is dropped
        } else {
            flush(&mut current);
        }
    }
    flush(&mut current);
    tokens
}

fn is_hyphen(c: char) -> bool {
    matches!(c, '-' | '\u{2010}' | '\u{2011}')
}

/// A part-of-speech tagger producing coarse tags for one sentence.
pub trait Tagger: Send + Sync {
    fn tag(&self, sentence: &str) -> Vec<TaggedToken>;
}

/// Lexicon and suffix driven tagger.
///
/// Lookup order: closed-class words, noun exceptions, adjectives, verbs,
/// noun/verb ambiguous words (resolved by the previous word), then suffix
/// rules, defaulting to noun.
#[derive(Debug, Default, Clone, Copy)]
pub struct RuleTagger;

struct Lexicon {
    closed: HashSet<&'static str>,
    nouns: HashSet<&'static str>,
    adjectives: HashSet<&'static str>,
    verbs: HashSet<String>,
    noun_verbs: HashSet<String>,
}

fn entries(text: &'static str) -> impl Iterator<Item = &'static str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Base form plus its third-person singular.
fn with_s_form(words: impl Iterator<Item = &'static str>) -> HashSet<String> {
    let mut set = HashSet::new();
    for w in words {
        set.insert(w.to_string());
        set.insert(third_person(w));
    }
    set
}

fn third_person(w: &str) -> String {
    let consonant_y =
        w.len() > 1 && w.ends_with('y') && !matches!(w.as_bytes()[w.len() - 2], b'a' | b'e' | b'i' | b'o' | b'u');
    if consonant_y {
        format!("{}ies", &w[..w.len() - 1])
    } else if ["s", "x", "z", "ch", "sh", "o"].iter().any(|s| w.ends_with(s)) {
        format!("{w}es")
    } else {
        format!("{w}s")
    }
}

fn lexicon() -> &'static Lexicon {
    static LEXICON: OnceLock<Lexicon> = OnceLock::new();
    LEXICON.get_or_init(|| Lexicon {
        closed: entries(include_str!("lexicon/closed_class.txt")).collect(),
        nouns: entries(include_str!("lexicon/nouns.txt")).collect(),
        adjectives: entries(include_str!("lexicon/adjectives.txt")).collect(),
        verbs: with_s_form(entries(include_str!("lexicon/verbs.txt"))),
        noun_verbs: with_s_form(entries(include_str!("lexicon/noun_verbs.txt"))),
    })
}

const DETERMINERS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "its", "their", "our", "his", "her", "my", "your", "each",
    "every", "any", "some", "no", "whose",
];

const VERB_CUES: &[&str] = &[
    "i", "we", "you", "they", "he", "she", "it", "can", "could", "may", "might", "must", "shall", "should", "will",
    "would", "cannot",
];

impl RuleTagger {
    pub fn tag_word(&self, word: &str, previous: Option<&str>) -> Tag {
        let lex = lexicon();
        if lex.closed.contains(word) {
            return Tag::Other;
        }
        if lex.nouns.contains(word) {
            return Tag::Noun;
        }
        if lex.adjectives.contains(word) {
            return Tag::Adj;
        }
        if lex.verbs.contains(word) {
            return match previous {
                Some(p) if DETERMINERS.contains(&p) => Tag::Noun,
                _ => Tag::Other,
            };
        }
        if lex.noun_verbs.contains(word) {
            return match previous {
                Some(p) if VERB_CUES.contains(&p) => Tag::Other,
                _ => Tag::Noun,
            };
        }
        suffix_tag(word)
    }
}

fn suffix_tag(word: &str) -> Tag {
    let n = word.chars().count();
    if n < 4 {
        return Tag::Noun;
    }
    if word.ends_with("ly") {
        return Tag::Other;
    }
    for suffix in ["ing", "ed"] {
        if let Some(stem) = word.strip_suffix(suffix) {
            let consonant_end = stem
                .chars()
                .last()
                .is_some_and(|c| c.is_alphabetic() && !"aeiou".contains(c));
            let has_vowel = stem.chars().any(|c| "aeiouy".contains(c));
            if consonant_end && has_vowel {
                return Tag::Other;
            }
        }
    }
    if ["tion", "sion", "ment", "ness", "ity"]
        .iter()
        .any(|s| word.ends_with(s))
    {
        return Tag::Noun;
    }
    if ["ous", "ful", "ive", "ic", "al", "able", "ible"]
        .iter()
        .any(|s| word.ends_with(s))
    {
        return Tag::Adj;
    }
    Tag::Noun
}

impl Tagger for RuleTagger {
    fn tag(&self, sentence: &str) -> Vec<TaggedToken> {
        let mut previous: Option<String> = None;
        tokenize(sentence)
            .into_iter()
            .map(|surface| {
                let lower = surface.to_lowercase();
                let tag = self.tag_word(&lower, previous.as_deref());
                previous = Some(lower);
                TaggedToken::new(surface, tag)
            })
            .collect()
    }
}

/// Tokenize and tag one sentence with the built-in tagger.
pub fn tokenize_and_tag(sentence: &str) -> Vec<TaggedToken> {
    RuleTagger.tag(sentence)
}
