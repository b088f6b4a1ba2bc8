//! Text front end: sentences, tokens, tags, stems and candidate selection.

mod porter;
mod sentences;
mod stopwords;
mod tagger;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use porter::stem;
pub use sentences::{normalize_whitespace, split_sentences};
pub use stopwords::StopWords;
pub use tagger::{tokenize, tokenize_and_tag, RuleTagger, Tag, TaggedToken, Tagger};

use crate::error::{Error, Result};

/// One abstract with its title and gold keyword phrases.
///
/// Serialized as one line of the canonical JSON-lines corpus format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(rename = "abstract")]
    pub body: String,
    #[serde(default)]
    pub gold_keywords: Vec<String>,
    /// Sentences of `(surface, tag)` pairs from an external tagger.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre_tagged_tokens: Option<Vec<Vec<(String, String)>>>,
}

impl Document {
    pub fn new(id: impl Into<String>, title: impl Into<String>, body: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            title: title.into(),
            body: body.into(),
            gold_keywords: Vec::new(),
            pre_tagged_tokens: None,
        }
    }

    pub fn with_gold<S: Into<String>>(mut self, gold: impl IntoIterator<Item = S>) -> Self {
        self.gold_keywords = gold.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateToken {
    pub stem: String,
    pub surface: String,
    pub tag: Tag,
    pub sentence_index: usize,
    /// 1-based position among all tokens of the body.
    pub token_position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSequence {
    pub doc_id: String,
    pub tokens: Vec<CandidateToken>,
    pub sentence_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaggerMode {
    /// Always run the built-in tagger.
    #[default]
    Builtin,
    /// Use a document's `pre_tagged_tokens` when present, else the built-in tagger.
    PreTagged,
}

/// Candidate selection configured with a stopword list and tagger.
#[derive(Clone)]
pub struct TextProcessor {
    stopwords: Arc<StopWords>,
    tagger: Arc<dyn Tagger>,
    mode: TaggerMode,
}

impl Default for TextProcessor {
    fn default() -> Self {
        TextProcessor {
            stopwords: Arc::new(StopWords::english()),
            tagger: Arc::new(RuleTagger),
            mode: TaggerMode::Builtin,
        }
    }
}

impl std::fmt::Debug for TextProcessor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TextProcessor")
            .field("stopwords", &self.stopwords.len())
            .field("mode", &self.mode)
            .finish()
    }
}

impl TextProcessor {
    pub fn new(stopwords: StopWords, tagger: Arc<dyn Tagger>, mode: TaggerMode) -> Self {
        TextProcessor {
            stopwords: Arc::new(stopwords),
            tagger,
            mode,
        }
    }

    pub fn with_stopwords(mut self, stopwords: StopWords) -> Self {
        self.stopwords = Arc::new(stopwords);
        self
    }

    pub fn with_mode(mut self, mode: TaggerMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn stopwords(&self) -> &StopWords {
        &self.stopwords
    }

    fn tagged_sentences(&self, doc: &Document) -> Result<Vec<Vec<TaggedToken>>> {
        if let (TaggerMode::PreTagged, Some(pre)) = (self.mode, &doc.pre_tagged_tokens) {
            let sentences = pre
                .iter()
                .map(|sentence| {
                    sentence
                        .iter()
                        .filter_map(|(surface, label)| {
                            let joined: String = tokenize(surface).concat();
                            (!joined.is_empty()).then(|| TaggedToken::new(joined, Tag::from_label(label)))
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            if sentences.iter().all(Vec::is_empty) {
                return Err(Error::EmptyDocument);
            }
            return Ok(sentences);
        }
        Ok(split_sentences(&doc.body)?.iter().map(|s| self.tagger.tag(s)).collect())
    }

    /// Nouns and adjectives of the body, stemmed, with sentence and token
    /// positions. Stopwords, single characters and tokens without letters are
    /// never candidates.
    pub fn select_candidates(&self, doc: &Document) -> Result<CandidateSequence> {
        if doc.body.trim().is_empty() && doc.pre_tagged_tokens.is_none() {
            return Err(Error::EmptyDocument);
        }
        let sentences = self.tagged_sentences(doc)?;
        let mut tokens = Vec::new();
        let mut position = 0;
        for (sentence_index, sentence) in sentences.iter().enumerate() {
            for token in sentence {
                position += 1;
                if !token.tag.is_candidate() {
                    continue;
                }
                let lower = token.surface.to_lowercase();
                if lower.chars().count() < 2 || self.stopwords.contains(&lower) {
                    continue;
                }
                tokens.push(CandidateToken {
                    stem: stem(&lower),
                    surface: token.surface.clone(),
                    tag: token.tag,
                    sentence_index,
                    token_position: position,
                });
            }
        }
        if tokens.is_empty() {
            return Err(Error::NoCandidates { doc_id: doc.id.clone() });
        }
        Ok(CandidateSequence {
            doc_id: doc.id.clone(),
            tokens,
            sentence_count: sentences.len().max(1),
        })
    }

    /// Tokenize, drop stopwords, stem and deduplicate. Used for gold phrases
    /// and titles.
    pub fn unigram_stems<S: AsRef<str>>(&self, phrases: &[S]) -> BTreeSet<String> {
        phrases
            .iter()
            .flat_map(|p| tokenize(p.as_ref()))
            .map(|t| t.to_lowercase())
            .filter(|t| !self.stopwords.contains(t))
            .map(|t| stem(&t))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stems(seq: &CandidateSequence) -> Vec<&str> {
        seq.tokens.iter().map(|t| t.stem.as_str()).collect()
    }

    #[test]
    fn cars_example() {
        let doc = Document::new("d", "", "Fast cars win. Cars cost.");
        let seq = TextProcessor::default().select_candidates(&doc).unwrap();
        assert_eq!(seq.sentence_count, 2);
        let got: Vec<_> = seq
            .tokens
            .iter()
            .map(|t| (t.stem.as_str(), t.tag, t.sentence_index, t.token_position))
            .collect();
        assert_eq!(
            got,
            vec![
                ("fast", Tag::Adj, 0, 1),
                ("car", Tag::Noun, 0, 2),
                ("car", Tag::Noun, 1, 4),
            ]
        );
    }

    #[test]
    fn only_function_words_is_an_error() {
        let doc = Document::new("d", "", "We were there. It is what it is.");
        assert!(matches!(
            TextProcessor::default().select_candidates(&doc),
            Err(Error::NoCandidates { .. })
        ));
    }

    #[test]
    fn keyword_extraction_stems() {
        let doc = Document::new("d", "", "keyword extraction");
        let seq = TextProcessor::default().select_candidates(&doc).unwrap();
        assert_eq!(stems(&seq), vec!["keyword", "extract"]);
    }

    #[test]
    fn empty_body_is_an_error() {
        let doc = Document::new("d", "t", "   ");
        assert!(matches!(
            TextProcessor::default().select_candidates(&doc),
            Err(Error::EmptyDocument)
        ));
    }

    #[test]
    fn pre_tagged_tokens_bypass_the_tagger() {
        let mut doc = Document::new("d", "", "ignored text here");
        doc.pre_tagged_tokens = Some(vec![
            vec![("Graphs".into(), "NNS".into()), ("run".into(), "VBP".into())],
            vec![
                ("fast".into(), "JJ".into()),
                (",".into(), ",".into()),
                ("x-ray".into(), "NN".into()),
            ],
        ]);
        let tp = TextProcessor::default().with_mode(TaggerMode::PreTagged);
        let seq = tp.select_candidates(&doc).unwrap();
        let got: Vec<_> = seq
            .tokens
            .iter()
            .map(|t| (t.stem.as_str(), t.sentence_index, t.token_position))
            .collect();
        assert_eq!(got, vec![("graph", 0, 1), ("fast", 1, 3), ("xrai", 1, 4)]);

        // builtin mode ignores the annotations
        let seq = TextProcessor::default().select_candidates(&doc).unwrap();
        assert_eq!(stems(&seq), vec!["text"]);
    }

    #[test]
    fn gold_unigrams() {
        let tp = TextProcessor::default();
        let set = tp.unigram_stems(&["keyword extraction", "Titles", "state of the art"]);
        let got: Vec<_> = set.iter().map(String::as_str).collect();
        assert_eq!(got, vec!["art", "extract", "keyword", "state", "titl"]);
    }
}
