//! Labelled datasets, class balancing, the two classifiers and keyword ranking.

pub mod logistic;
pub mod model;
pub mod naive_bayes;
pub mod persist;
pub mod smote;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{FeatureRecord, Label, FEATURE_COUNT, FEATURE_NAMES};
use crate::pipeline::Pipeline;
use crate::textproc::{Document, TextProcessor};

pub use logistic::{fit_logistic, train_logistic_regression, LogisticFit, LogisticObjective, LrConfig};
pub use model::{Algorithm, ModelParams, Scaler, TrainedModel, TrainingMeta};
pub use naive_bayes::train_naive_bayes;
pub use persist::{load_model, model_from_str, model_to_string, save_model, FORMAT_VERSION};
pub use smote::{smote_balance, SmoteConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetOrigin {
    Natural,
    SmoteBalanced,
}

/// Labelled feature records, possibly spanning many documents.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub records: Vec<FeatureRecord>,
    pub feature_order: [&'static str; FEATURE_COUNT],
    pub origin: DatasetOrigin,
}

impl LabeledDataset {
    /// Fails if any record is unlabelled.
    pub fn new(records: Vec<FeatureRecord>) -> Result<Self> {
        if let Some(r) = records.iter().find(|r| r.label.is_none()) {
            return Err(Error::Input(format!(
                "record `{}` of document `{}` has no label",
                r.stem, r.doc_id
            )));
        }
        Ok(LabeledDataset {
            records,
            feature_order: FEATURE_NAMES,
            origin: DatasetOrigin::Natural,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.records.iter().filter(|r| r.is_positive()).count()
    }

    pub fn synthetic_count(&self) -> usize {
        self.records.iter().filter(|r| r.synthetic).count()
    }

    /// Fails unless both classes are present.
    pub fn require_both_classes(&self) -> Result<()> {
        let positives = self.positive_count();
        if positives == 0 || positives == self.len() {
            return Err(Error::Training(format!(
                "need both classes, got {} positive and {} negative records",
                positives,
                self.len() - positives
            )));
        }
        Ok(())
    }
}

/// Label each record positive iff its stem is a stemmed unigram of a gold phrase.
pub fn assign_labels<S: AsRef<str>>(records: Vec<FeatureRecord>, gold: &[S], text: &TextProcessor) -> LabeledDataset {
    let gold = text.unigram_stems(gold);
    let records = records
        .into_iter()
        .map(|mut r| {
            r.label = Some(if gold.contains(&r.stem) {
                Label::Positive
            } else {
                Label::Negative
            });
            r
        })
        .collect();
    LabeledDataset {
        records,
        feature_order: FEATURE_NAMES,
        origin: DatasetOrigin::Natural,
    }
}

/// Anything that scores a record with a keyword probability.
pub trait Classifier: Send + Sync {
    fn positive_probability(&self, record: &FeatureRecord) -> Result<f64>;
}

/// Produces a classifier from a training set.
pub trait Trainer: Send + Sync {
    fn train(&self, ds: &LabeledDataset) -> Result<Box<dyn Classifier>>;
}

pub fn train_model(ds: &LabeledDataset, algorithm: Algorithm, lr: LrConfig, seed: u64) -> Result<TrainedModel> {
    match algorithm {
        Algorithm::NaiveBayes => train_naive_bayes(ds, seed),
        Algorithm::LogisticRegression => train_logistic_regression(ds, lr, seed),
    }
}

/// Trains one of the built-in model types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelTrainer {
    pub algorithm: Algorithm,
    pub lr: LrConfig,
    pub seed: u64,
}

impl Trainer for ModelTrainer {
    fn train(&self, ds: &LabeledDataset) -> Result<Box<dyn Classifier>> {
        Ok(Box::new(train_model(ds, self.algorithm, self.lr, self.seed)?))
    }
}

pub(crate) fn checked_features(record: &FeatureRecord) -> Result<[f64; FEATURE_COUNT]> {
    let x = record.features();
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::Input(format!(
            "feature `{}` of `{}` is not finite",
            FEATURE_NAMES[i], record.stem
        )));
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Count(usize),
    /// As many keywords as the document's title has distinct non-stopword stems.
    TitleLength,
}

impl std::fmt::Display for Cutoff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cutoff::Count(k) => write!(f, "{k}"),
            Cutoff::TitleLength => f.write_str("lenW"),
        }
    }
}

impl std::str::FromStr for Cutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("lenw") {
            return Ok(Cutoff::TitleLength);
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Cutoff::Count(k)),
            _ => Err(Error::InvalidParams(format!(
                "cutoff must be a positive integer or lenW, got `{s}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedKeyword {
    pub stem: String,
    pub probability: f64,
    pub first_position: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedKeywords {
    pub doc_id: String,
    pub entries: Vec<RankedKeyword>,
}

impl RankedKeywords {
    pub fn stems(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.stem.as_str()).collect()
    }
}

fn ranking_order(a: &RankedKeyword, b: &RankedKeyword) -> Ordering {
    b.probability
        .total_cmp(&a.probability)
        .then(a.first_position.cmp(&b.first_position))
        .then_with(|| a.stem.cmp(&b.stem))
}

/// Every record scored and sorted: probability descending, then earlier first
/// occurrence, then stem.
pub fn rank_records(classifier: &dyn Classifier, records: &[FeatureRecord]) -> Result<Vec<RankedKeyword>> {
    let mut entries = records
        .iter()
        .map(|r| {
            Ok(RankedKeyword {
                stem: r.stem.clone(),
                probability: classifier.positive_probability(r)?,
                first_position: r.first_position,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(ranking_order);
    Ok(entries)
}

/// Top keywords of one document.
pub fn rank_keywords(
    classifier: &dyn Classifier,
    pipeline: &Pipeline,
    doc: &Document,
    cutoff: Cutoff,
) -> Result<RankedKeywords> {
    let limit = match cutoff {
        Cutoff::Count(k) => k,
        Cutoff::TitleLength => {
            let n = pipeline.text.unigram_stems(&[doc.title.as_str()]).len();
            if n == 0 {
                return Err(Error::Input(format!(
                    "document `{}` has no title words; title-length cutoff needs a title",
                    doc.id
                )));
            }
            n
        }
    };
    let records = pipeline.records(doc)?;
    let mut entries = rank_records(classifier, &records)?;
    entries.truncate(limit);
    Ok(RankedKeywords {
        doc_id: doc.id.clone(),
        entries,
    })
}
