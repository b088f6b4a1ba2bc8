//! Cross-validation, cross-collection and title-overlap evaluation.

mod report;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use report::{macro_average, positive_prf, DocResult, EvalBlock, EvalMode, EvalReport, Prf};

use crate::error::{Error, Result};
use crate::features::FeatureRecord;
use crate::learn::{rank_records, smote_balance, Classifier, Cutoff, LabeledDataset, SmoteConfig, Trainer};
use crate::pipeline::Pipeline;
use crate::textproc::Document;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Counts of one document's records: predicted positive when the probability
/// reaches `threshold`.
pub fn confusion(
    classifier: &dyn Classifier,
    records: &[FeatureRecord],
    threshold: f64,
) -> Result<(usize, usize, usize)> {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for r in records {
        let predicted = classifier.positive_probability(r)? >= threshold;
        match (predicted, r.is_positive()) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok((tp, fp, fn_))
}

/// Predicts each record's own label. Useful as an upper-bound baseline.
#[derive(Debug, Clone, Copy, Default)]
pub struct OracleClassifier;

impl Classifier for OracleClassifier {
    fn positive_probability(&self, record: &FeatureRecord) -> Result<f64> {
        Ok(if record.is_positive() { 1.0 } else { 0.0 })
    }
}

/// Calls every record a keyword.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantClassifier(pub f64);

impl Classifier for ConstantClassifier {
    fn positive_probability(&self, _: &FeatureRecord) -> Result<f64> {
        Ok(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub folds: usize,
    pub smote: Option<SmoteConfig>,
    pub threshold: f64,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            smote: None,
            threshold: DEFAULT_THRESHOLD,
            seed: 0,
        }
    }
}

fn check_threshold(threshold: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidParams(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    Ok(())
}

/// Fold of each of `n` items: a seeded shuffle, then round-robin.
pub fn assign_folds(n: usize, folds: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold = vec![0; n];
    for (position, &item) in order.iter().enumerate() {
        fold[item] = position % folds;
    }
    fold
}

/// Per-document results of one fold, keyed by corpus index.
type FoldResults = Vec<(usize, DocResult)>;

/// Document-level k-fold cross-validation. Oversampling, when configured, is
/// applied to training folds only. A fold whose training part cannot be
/// balanced or trained is skipped and its documents reported as skipped.
pub fn cross_validate(
    pipeline: &Pipeline,
    corpus: &[Document],
    trainer: &dyn Trainer,
    config: &CvConfig,
) -> Result<EvalReport> {
    check_threshold(config.threshold)?;
    if let Some(s) = config.smote {
        s.validate()?;
    }
    let prepared = pipeline.corpus_records(corpus)?;
    let docs = &prepared.documents;
    if config.folds < 2 || config.folds > docs.len() {
        return Err(Error::InvalidParams(format!(
            "folds must be between 2 and the {} usable documents, got {}",
            docs.len(),
            config.folds
        )));
    }
    let fold_of = assign_folds(docs.len(), config.folds, config.seed);

    let outcomes: Vec<(usize, Result<FoldResults>)> = (0..config.folds)
        .into_par_iter()
        .map(|fold| {
            let run = || -> Result<FoldResults> {
                let train: Vec<FeatureRecord> = docs
                    .iter()
                    .zip(&fold_of)
                    .filter(|(_, f)| **f != fold)
                    .flat_map(|((_, records), _)| records.iter().cloned())
                    .collect();
                let mut ds = LabeledDataset::new(train)?;
                ds.require_both_classes()?;
                if let Some(smote) = config.smote {
                    ds = smote_balance(&ds, smote, config.seed.wrapping_add(fold as u64))?;
                }
                let classifier = trainer.train(&ds)?;
                docs.iter()
                    .enumerate()
                    .filter(|(i, _)| fold_of[*i] == fold)
                    .map(|(i, (corpus_index, records))| {
                        let (tp, fp, fn_) = confusion(classifier.as_ref(), records, config.threshold)?;
                        Ok((i, DocResult::new(corpus[*corpus_index].id.clone(), tp, fp, fn_)))
                    })
                    .collect()
            };
            (fold, run())
        })
        .collect();

    let mut report = EvalReport::new(EvalMode::Cv, "-", "-");
    report.set("folds", config.folds);
    report.set("seed", config.seed);
    report.set(
        "smote",
        config
            .smote
            .map_or("none".to_string(), |s| format!("{}%/k={}", s.percent, s.k)),
    );
    report.set("threshold", config.threshold);
    report.skipped = prepared.skipped.clone();

    let mut results: Vec<Option<DocResult>> = vec![None; docs.len()];
    for (fold, outcome) in outcomes {
        match outcome {
            Ok(rows) => {
                for (i, row) in rows {
                    results[i] = Some(row);
                }
            }
            Err(e @ Error::InvalidParams(_)) => return Err(e),
            Err(e) => {
                log::warn!("skipping fold {fold}: {e}");
                report.notes.push(format!("fold {fold} skipped: {e}"));
                for (i, (corpus_index, _)) in docs.iter().enumerate() {
                    if fold_of[i] == fold {
                        report
                            .skipped
                            .push((corpus[*corpus_index].id.clone(), format!("fold {fold} skipped")));
                    }
                }
            }
        }
    }
    if config.smote.is_some() {
        report
            .notes
            .push("oversampling applied inside training folds only".into());
    }
    report
        .blocks
        .push(EvalBlock::new("-", results.into_iter().flatten().collect()));
    Ok(report)
}

/// Score a trained classifier on every labelled record of another corpus.
pub fn cross_collection_evaluate(
    pipeline: &Pipeline,
    classifier: &dyn Classifier,
    corpus: &[Document],
    threshold: f64,
) -> Result<EvalReport> {
    check_threshold(threshold)?;
    let prepared = pipeline.corpus_records(corpus)?;
    let rows = prepared
        .documents
        .par_iter()
        .map(|(i, records)| {
            let (tp, fp, fn_) = confusion(classifier, records, threshold)?;
            Ok(DocResult::new(corpus[*i].id.clone(), tp, fp, fn_))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = EvalReport::new(EvalMode::Cross, "-", "-");
    report.set("threshold", threshold);
    report.skipped = prepared.skipped;
    report.blocks.push(EvalBlock::new("-", rows));
    Ok(report)
}

/// Overlap between the top-ranked stems and the stemmed, stopword-free title
/// words, one block per cutoff.
pub fn title_overlap_evaluate(
    pipeline: &Pipeline,
    classifier: &dyn Classifier,
    corpus: &[Document],
    cutoffs: &[Cutoff],
) -> Result<EvalReport> {
    if cutoffs.is_empty() {
        return Err(Error::InvalidParams("at least one cutoff is required".into()));
    }
    pipeline.rank.validate()?;
    let per_doc: Vec<std::result::Result<Vec<DocResult>, String>> = corpus
        .par_iter()
        .map(|doc| {
            let title: BTreeSet<String> = pipeline.text.unigram_stems(&[doc.title.as_str()]);
            if title.is_empty() {
                return Err("title has no words after stopword removal".to_string());
            }
            let records = pipeline.records(doc).map_err(|e| e.to_string())?;
            let ranked = rank_records(classifier, &records).map_err(|e| e.to_string())?;
            Ok(cutoffs
                .iter()
                .map(|cutoff| {
                    let k = match cutoff {
                        Cutoff::Count(k) => *k,
                        Cutoff::TitleLength => title.len(),
                    };
                    let predicted = &ranked[..k.min(ranked.len())];
                    let tp = predicted.iter().filter(|e| title.contains(&e.stem)).count();
                    DocResult::new(doc.id.clone(), tp, predicted.len() - tp, title.len() - tp)
                })
                .collect())
        })
        .collect();

    let mut report = EvalReport::new(EvalMode::Title, "-", "-");
    let names: Vec<String> = cutoffs.iter().map(ToString::to_string).collect();
    report.set("at", names.join(","));
    let mut columns: Vec<Vec<DocResult>> = vec![Vec::new(); cutoffs.len()];
    for (doc, outcome) in corpus.iter().zip(per_doc) {
        match outcome {
            Ok(rows) => {
                for (column, row) in columns.iter_mut().zip(rows) {
                    column.push(row);
                }
            }
            Err(reason) => {
                log::warn!("skipping document `{}`: {reason}", doc.id);
                report.skipped.push((doc.id.clone(), reason));
            }
        }
    }
    for (name, rows) in names.into_iter().zip(columns) {
        report.blocks.push(EvalBlock::new(name, rows));
    }
    Ok(report)
}
