//! Gaussian Naive Bayes.

use super::model::{Algorithm, ModelParams, Scaler, TrainedModel, TrainingMeta};
use super::LabeledDataset;
use crate::error::Result;
use crate::features::FEATURE_COUNT;

pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Class 0 is negative, class 1 positive. Priors are class frequencies,
/// variances the unbiased sample variance floored at [`VARIANCE_FLOOR`].
pub fn train_naive_bayes(ds: &LabeledDataset, seed: u64) -> Result<TrainedModel> {
    ds.require_both_classes()?;
    let mut counts = [0usize; 2];
    let mut sums = [[0.0; FEATURE_COUNT]; 2];
    for r in &ds.records {
        let c = r.is_positive() as usize;
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(r.features()) {
            *s += v;
        }
    }
    let mut means = [[0.0; FEATURE_COUNT]; 2];
    for c in 0..2 {
        for j in 0..FEATURE_COUNT {
            means[c][j] = sums[c][j] / counts[c] as f64;
        }
    }
    let mut squares = [[0.0; FEATURE_COUNT]; 2];
    for r in &ds.records {
        let c = r.is_positive() as usize;
        for (j, v) in r.features().iter().enumerate() {
            squares[c][j] += (v - means[c][j]).powi(2);
        }
    }
    let mut variances = [[0.0; FEATURE_COUNT]; 2];
    for c in 0..2 {
        let dof = counts[c].saturating_sub(1).max(1) as f64;
        for j in 0..FEATURE_COUNT {
            variances[c][j] = (squares[c][j] / dof).max(VARIANCE_FLOOR);
        }
    }
    let n = ds.len() as f64;
    let params = ModelParams::NaiveBayes {
        priors: [counts[0] as f64 / n, counts[1] as f64 / n],
        means: means.map(Vec::from).to_vec(),
        variances: variances.map(Vec::from).to_vec(),
    };
    Ok(TrainedModel::new(
        Algorithm::NaiveBayes,
        seed,
        Scaler::identity(),
        params,
        TrainingMeta::from_dataset(ds),
    ))
}

/// Posterior of class 1 from per-class log joint densities, via log-sum-exp.
pub(crate) fn posterior(priors: &[f64; 2], means: &[Vec<f64>], variances: &[Vec<f64>], x: &[f64]) -> f64 {
    let log_joint = |c: usize| {
        let mut acc = priors[c].ln();
        for (j, v) in x.iter().enumerate() {
            let var = variances[c][j];
            acc -= 0.5 * (2.0 * std::f64::consts::PI * var).ln() + (v - means[c][j]).powi(2) / (2.0 * var);
        }
        acc
    };
    let (l0, l1) = (log_joint(0), log_joint(1));
    let m = l0.max(l1);
    if m == f64::NEG_INFINITY {
        return priors[1];
    }
    let (e0, e1) = ((l0 - m).exp(), (l1 - m).exp());
    e1 / (e0 + e1)
}
