use std::path::{Path, PathBuf};

use keytitle::corpus::*;
use keytitle::textproc::{tokenize, TextProcessor};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

#[test]
fn hulth_directories_are_ingested() {
    let dirs = [fixtures().join("hulth/Training"), fixtures().join("hulth/Test")];
    let docs = ingest_hulth(&dirs).unwrap();
    let ids: Vec<&str> = docs.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, vec!["Training/1", "2", "Test/1"]);
    assert_eq!(docs[0].title, "Graph mining for keyword extraction");
    assert_eq!(docs[0].gold_keywords, vec!["graph mining", "keyword extraction"]);
    assert!(docs[1].gold_keywords.is_empty());

    // body tokens survive ingestion unchanged
    let raw = std::fs::read_to_string(dirs[0].join("1.abstr")).unwrap();
    let body_part: String = raw.lines().skip(2).collect::<Vec<_>>().join("\n");
    assert_eq!(tokenize(&docs[0].body), tokenize(&body_part));

    let text = to_jsonl(&docs).unwrap();
    assert_eq!(parse_jsonl(&text).unwrap(), docs);
}

#[test]
fn empty_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ingest_hulth(&[dir.path().to_path_buf()]).is_err());
    assert!(ingest_hulth(&[dir.path().join("missing")]).is_err());
}

#[test]
fn filter_output_is_an_ordered_subsequence() {
    let corpus = read_jsonl(&fixtures().join("mini_corpus.jsonl")).unwrap();
    let mut shortened = corpus.clone();
    shortened[3].body = "Just one sentence without gold".into();
    shortened[3].gold_keywords.clear();
    shortened[7].gold_keywords.clear();
    let kept = filter_corpus(&shortened, 2, 1);
    assert_eq!(kept.len(), 18);
    let mut it = shortened.iter();
    assert!(kept.iter().all(|k| it.any(|d| d == k)));
    assert_eq!(filter_corpus(&corpus, 0, 0), corpus);
}

#[test]
fn mini_corpus_statistics_are_frozen() {
    let corpus = read_jsonl(&fixtures().join("mini_corpus.jsonl")).unwrap();
    let s = corpus_stats(&corpus, &TextProcessor::default()).unwrap();
    assert_eq!(s.doc_count, 20);
    assert!((s.avg_length - 33.95).abs() < 1e-9);
    assert!((s.avg_gold - 5.5).abs() < 1e-9);
    assert!((s.keyword_presence - 95.5).abs() < 1e-9);
}
