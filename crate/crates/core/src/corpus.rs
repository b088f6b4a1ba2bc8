//! Corpus files: JSON lines, Hulth-style ingestion, filters and statistics.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::textproc::{normalize_whitespace, split_sentences, stem, tokenize, Document, TextProcessor};

/// Parse a JSON-lines corpus. Blank lines are ignored; ids must be non-empty
/// and unique.
pub fn parse_jsonl(text: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(line).map_err(|e| Error::Json {
            context: format!("corpus line {}", n + 1),
            source: e,
        })?;
        if doc.id.is_empty() {
            return Err(Error::Corpus(format!("line {}: empty document id", n + 1)));
        }
        if !seen.insert(doc.id.clone()) {
            return Err(Error::Corpus(format!(
                "line {}: duplicate document id `{}`",
                n + 1,
                doc.id
            )));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Document>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_jsonl(&text).map_err(|e| match e {
        Error::Corpus(msg) => Error::Corpus(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn to_jsonl(docs: &[Document]) -> Result<String> {
    let mut out = String::new();
    for doc in docs {
        let line = serde_json::to_string(doc).map_err(|e| Error::Json {
            context: format!("document `{}`", doc.id),
            source: e,
        })?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

/// Split a Hulth `.abstr` file into title and abstract. The title is the
/// leading text up to the first blank line or the first line that starts with
/// whitespace.
pub fn split_hulth_abstract(text: &str) -> (String, String) {
    let text = text.trim_start_matches(['\n', '\r']);
    let mut title = Vec::new();
    let mut body = Vec::new();
    let mut in_title = true;
    for (i, line) in text.lines().enumerate() {
        if in_title && i > 0 && (line.trim().is_empty() || line.starts_with([' ', '\t'])) {
            in_title = false;
        }
        if in_title {
            title.push(line);
        } else {
            body.push(line);
        }
    }
    (
        normalize_whitespace(&title.join(" ")),
        normalize_whitespace(&body.join(" ")),
    )
}

/// Keyword phrases of a `.uncontr` file.
pub fn parse_hulth_keywords(text: &str) -> Vec<String> {
    text.split(';')
        .map(normalize_whitespace)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Read every `<name>.abstr` in the given directories, pairing each with
/// `<name>.uncontr` when present. Documents are ordered by directory, then
/// file name. An id that repeats across directories is prefixed with the
/// directory name.
pub fn ingest_hulth(dirs: &[PathBuf]) -> Result<Vec<Document>> {
    let mut found: Vec<(PathBuf, String)> = Vec::new();
    for dir in dirs {
        let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
        let mut names = Vec::new();
        for entry in entries {
            let path = entry.map_err(|e| Error::io(dir, e))?.path();
            if path.extension().is_some_and(|x| x == "abstr") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    names.push(stem.to_string());
                }
            }
        }
        names.sort();
        found.extend(names.into_iter().map(|n| (dir.clone(), n)));
    }
    if found.is_empty() {
        return Err(Error::Corpus("no .abstr files found".into()));
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for (_, name) in &found {
        *counts.entry(name.as_str()).or_default() += 1;
    }

    let mut docs = Vec::with_capacity(found.len());
    for (dir, name) in &found {
        let abstr = dir.join(format!("{name}.abstr"));
        let text = std::fs::read_to_string(&abstr).map_err(|e| Error::io(&abstr, e))?;
        let (title, body) = split_hulth_abstract(&text);
        let keywords_path = dir.join(format!("{name}.uncontr"));
        let gold = match std::fs::read_to_string(&keywords_path) {
            Ok(t) => parse_hulth_keywords(&t),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                log::warn!("{} has no .uncontr file; gold keywords left empty", abstr.display());
                Vec::new()
            }
            Err(e) => return Err(Error::io(&keywords_path, e)),
        };
        let id = if counts[name.as_str()] > 1 {
            let dir_name = dir
                .file_name()
                .map(|d| d.to_string_lossy().into_owned())
                .unwrap_or_default();
            format!("{dir_name}/{name}")
        } else {
            name.clone()
        };
        docs.push(Document::new(id, title, body).with_gold(gold));
    }
    Ok(docs)
}

/// Documents with at least `min_sentences` sentences and `min_gold` gold
/// phrases, in their original order.
pub fn filter_corpus(corpus: &[Document], min_sentences: usize, min_gold: usize) -> Vec<Document> {
    corpus
        .iter()
        .filter(|d| d.gold_keywords.len() >= min_gold)
        .filter(|d| min_sentences == 0 || split_sentences(&d.body).is_ok_and(|s| s.len() >= min_sentences))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorpusStats {
    pub doc_count: usize,
    /// Mean body length in tokens.
    pub avg_length: f64,
    /// Mean number of distinct gold unigram stems.
    pub avg_gold: f64,
    /// Mean percentage of gold stems that occur in the body, over documents
    /// with gold keywords.
    pub keyword_presence: f64,
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "documents: {}", self.doc_count)?;
        writeln!(f, "avg_length: {:.2}", self.avg_length)?;
        writeln!(f, "avg_gold: {:.2}", self.avg_gold)?;
        writeln!(f, "keyword_presence: {:.2}", self.keyword_presence)
    }
}

pub fn corpus_stats(corpus: &[Document], text: &TextProcessor) -> Result<CorpusStats> {
    if corpus.is_empty() {
        return Err(Error::Corpus("cannot compute statistics of an empty corpus".into()));
    }
    let mut tokens = 0usize;
    let mut gold_total = 0usize;
    let mut presence_sum = 0.0;
    let mut with_gold = 0usize;
    for doc in corpus {
        let body = tokenize(&doc.body);
        tokens += body.len();
        let gold = text.unigram_stems(&doc.gold_keywords);
        gold_total += gold.len();
        if !gold.is_empty() {
            let body_stems: BTreeSet<String> = body.iter().map(|t| stem(&t.to_lowercase())).collect();
            let present = gold.iter().filter(|g| body_stems.contains(*g)).count();
            presence_sum += 100.0 * present as f64 / gold.len() as f64;
            with_gold += 1;
        }
    }
    let n = corpus.len() as f64;
    Ok(CorpusStats {
        doc_count: corpus.len(),
        avg_length: tokens as f64 / n,
        avg_gold: gold_total as f64 / n,
        keyword_presence: if with_gold == 0 {
            0.0
        } else {
            presence_sum / with_gold as f64
        },
    })
}
