//! Synthetic minority oversampling of the positive class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{DatasetOrigin, LabeledDataset};
use crate::error::{Error, Result};
use crate::features::{FeatureRecord, Label, FEATURE_COUNT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoteConfig {
    /// Oversampling amount; 300 adds three synthetic records per positive.
    pub percent: u32,
    /// Nearest positive neighbours to draw from.
    pub k: usize,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        SmoteConfig { percent: 300, k: 5 }
    }
}

impl SmoteConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.percent.is_multiple_of(100) {
            return Err(Error::InvalidParams(format!(
                "SMOTE percent must be a multiple of 100, got {}",
                self.percent
            )));
        }
        if self.k == 0 {
            return Err(Error::InvalidParams("SMOTE k must be at least 1".into()));
        }
        Ok(())
    }
}

fn squared_distance(a: &[f64; FEATURE_COUNT], b: &[f64; FEATURE_COUNT]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Append `percent / 100` synthetic positives per positive record.
///
/// Each synthetic point lies on the segment from a positive record to one of
/// its `k` nearest positive neighbours (Euclidean, raw features, ties by
/// index), chosen uniformly, at a uniform offset along the segment.
pub fn smote_balance(ds: &LabeledDataset, config: SmoteConfig, seed: u64) -> Result<LabeledDataset> {
    config.validate()?;
    if config.percent == 0 {
        return Ok(ds.clone());
    }
    let positives: Vec<&FeatureRecord> = ds.records.iter().filter(|r| r.is_positive()).collect();
    if positives.len() < 2 {
        return Err(Error::Balancing(format!(
            "SMOTE needs at least 2 positive records, found {}",
            positives.len()
        )));
    }
    let mut k = config.k;
    if k > positives.len() - 1 {
        k = positives.len() - 1;
        log::warn!(
            "SMOTE k={} exceeds the {} available neighbours; using k={k}",
            config.k,
            positives.len() - 1
        );
    }

    let points: Vec<[f64; FEATURE_COUNT]> = positives.iter().map(|r| r.features()).collect();
    let per_seed = (config.percent / 100) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = ds.records.clone();
    records.reserve(per_seed * positives.len());
    let mut serial = 0usize;

    for (i, origin) in positives.iter().enumerate() {
        let mut others: Vec<(f64, usize)> = (0..points.len())
            .filter(|&j| j != i)
            .map(|j| (squared_distance(&points[i], &points[j]), j))
            .collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        others.truncate(k);

        for _ in 0..per_seed {
            let neighbour = &points[others[rng.random_range(0..k)].1];
            let u: f64 = rng.random();
            let mut values = points[i];
            for (v, n) in values.iter_mut().zip(neighbour) {
                *v += u * (n - *v);
            }
            let mut synthetic = FeatureRecord {
                stem: format!("{}#smote{serial}", origin.stem),
                label: Some(Label::Positive),
                synthetic: true,
                ..(*origin).clone()
            };
            synthetic.set_features(values);
            records.push(synthetic);
            serial += 1;
        }
    }
    Ok(LabeledDataset {
        records,
        feature_order: ds.feature_order,
        origin: DatasetOrigin::SmoteBalanced,
    })
}
