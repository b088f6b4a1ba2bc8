//! Trained models and their prediction.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::logistic::sigmoid;
use super::naive_bayes::posterior;
use super::smote::SmoteConfig;
use super::{checked_features, Classifier, LabeledDataset};
use crate::error::{Error, Result};
use crate::features::{FeatureRecord, RankParams, FEATURE_COUNT, FEATURE_NAMES};
use crate::textproc::TaggerMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    NaiveBayes,
    LogisticRegression,
}

impl Algorithm {
    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::LogisticRegression => "lr",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nb" | "naive_bayes" => Ok(Algorithm::NaiveBayes),
            "lr" | "logistic_regression" => Ok(Algorithm::LogisticRegression),
            other => Err(Error::InvalidParams(format!(
                "unknown algorithm `{other}` (expected nb or lr)"
            ))),
        }
    }
}

/// Per-feature standardisation `(x - mean) / std`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Scaler {
    pub fn identity() -> Self {
        Scaler {
            means: vec![0.0; FEATURE_COUNT],
            stds: vec![1.0; FEATURE_COUNT],
        }
    }

    /// Population statistics; a constant feature gets std 1.
    pub fn fit(rows: &[[f64; FEATURE_COUNT]]) -> Self {
        let n = rows.len().max(1) as f64;
        let means: Vec<f64> = (0..FEATURE_COUNT)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n)
            .collect();
        let stds = (0..FEATURE_COUNT)
            .map(|j| {
                let var = rows.iter().map(|r| (r[j] - means[j]).powi(2)).sum::<f64>() / n;
                let std = var.sqrt();
                if std > 0.0 {
                    std
                } else {
                    1.0
                }
            })
            .collect();
        Scaler { means, stds }
    }

    pub fn transform(&self, x: &[f64; FEATURE_COUNT]) -> [f64; FEATURE_COUNT] {
        std::array::from_fn(|j| (x[j] - self.means[j]) / self.stds[j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelParams {
    /// Index 0 is the negative class, 1 the positive class.
    NaiveBayes {
        priors: [f64; 2],
        means: Vec<Vec<f64>>,
        variances: Vec<Vec<f64>>,
    },
    LogisticRegression {
        weights: Vec<f64>,
        bias: f64,
        ridge: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub corpus: String,
    pub documents: usize,
    pub records: usize,
    pub positives: usize,
    pub synthetic: usize,
    pub smote: Option<SmoteConfig>,
    pub rank_params: RankParams,
    pub tagger: TaggerMode,
    pub converged: bool,
    pub iterations: usize,
    pub final_loss: Option<f64>,
}

impl TrainingMeta {
    pub fn from_dataset(ds: &LabeledDataset) -> Self {
        let mut docs: Vec<&str> = ds.records.iter().map(|r| r.doc_id.as_str()).collect();
        docs.sort_unstable();
        docs.dedup();
        TrainingMeta {
            corpus: String::new(),
            documents: docs.len(),
            records: ds.len(),
            positives: ds.positive_count(),
            synthetic: ds.synthetic_count(),
            smote: None,
            rank_params: RankParams::default(),
            tagger: TaggerMode::default(),
            converged: true,
            iterations: 0,
            final_loss: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub algorithm: Algorithm,
    pub feature_order: Vec<String>,
    pub seed: u64,
    pub scaler: Scaler,
    pub params: ModelParams,
    pub training_meta: TrainingMeta,
}

impl TrainedModel {
    pub fn new(
        algorithm: Algorithm,
        seed: u64,
        scaler: Scaler,
        params: ModelParams,
        training_meta: TrainingMeta,
    ) -> Self {
        TrainedModel {
            algorithm,
            feature_order: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
            seed,
            scaler,
            params,
            training_meta,
        }
    }

    /// Structural checks applied to loaded models.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::ModelFormat(msg));
        if self.feature_order != FEATURE_NAMES {
            return bad(format!("unexpected feature order {:?}", self.feature_order));
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if self.scaler.means.len() != FEATURE_COUNT
            || self.scaler.stds.len() != FEATURE_COUNT
            || !finite(&self.scaler.means)
            || !self.scaler.stds.iter().all(|s| s.is_finite() && *s > 0.0)
        {
            return bad("scaler needs six finite means and positive stds".into());
        }
        match (&self.params, self.algorithm) {
            (
                ModelParams::NaiveBayes {
                    priors,
                    means,
                    variances,
                },
                Algorithm::NaiveBayes,
            ) => {
                if !priors.iter().all(|p| p.is_finite() && *p > 0.0) || (priors[0] + priors[1] - 1.0).abs() > 1e-9 {
                    return bad(format!("priors {priors:?} must be positive and sum to 1"));
                }
                let shaped =
                    |m: &Vec<Vec<f64>>| m.len() == 2 && m.iter().all(|c| c.len() == FEATURE_COUNT && finite(c));
                if !shaped(means) || !shaped(variances) {
                    return bad("class statistics must be 2 x 6 finite values".into());
                }
                if variances.iter().flatten().any(|v| *v <= 0.0) {
                    return bad("variances must be positive".into());
                }
            }
            (ModelParams::LogisticRegression { weights, bias, ridge }, Algorithm::LogisticRegression) => {
                if weights.len() != FEATURE_COUNT || !finite(weights) || !bias.is_finite() || !(*ridge >= 0.0) {
                    return bad("logistic parameters must be six finite weights, a finite bias and ridge >= 0".into());
                }
            }
            _ => return bad("algorithm does not match its parameter block".into()),
        }
        Ok(())
    }

    pub fn predict(&self, x: &[f64; FEATURE_COUNT]) -> f64 {
        let z = self.scaler.transform(x);
        match &self.params {
            ModelParams::NaiveBayes {
                priors,
                means,
                variances,
            } => posterior(priors, means, variances, &z),
            ModelParams::LogisticRegression { weights, bias, .. } => {
                sigmoid(bias + weights.iter().zip(&z).map(|(w, v)| w * v).sum::<f64>())
            }
        }
    }
}

impl Classifier for TrainedModel {
    fn positive_probability(&self, record: &FeatureRecord) -> Result<f64> {
        Ok(self.predict(&checked_features(record)?))
    }
}
