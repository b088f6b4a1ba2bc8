//! Versioned, checksummed JSON model files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::model::{Algorithm, ModelParams, Scaler, TrainedModel, TrainingMeta};
use crate::error::{Error, Result};
use crate::io::write_atomic;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u64,
    algorithm: Algorithm,
    feature_order: Vec<String>,
    seed: u64,
    scaler: Scaler,
    params: ModelParams,
    training_meta: TrainingMeta,
    checksum: String,
}

fn checksum(model: &TrainedModel) -> Result<String> {
    let body = serde_json::to_vec(model).map_err(|e| Error::Json {
        context: "serializing model".into(),
        source: e,
    })?;
    Ok(hex::encode(Sha256::digest(&body)))
}

pub fn model_to_string(model: &TrainedModel) -> Result<String> {
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        algorithm: model.algorithm,
        feature_order: model.feature_order.clone(),
        seed: model.seed,
        scaler: model.scaler.clone(),
        params: model.params.clone(),
        training_meta: model.training_meta.clone(),
        checksum: checksum(model)?,
    };
    let mut text = serde_json::to_string_pretty(&file).map_err(|e| Error::Json {
        context: "serializing model".into(),
        source: e,
    })?;
    text.push('\n');
    Ok(text)
}

/// Checks, in order: the version tag, the structure, the checksum, then the
/// parameters themselves.
pub fn model_from_str(text: &str) -> Result<TrainedModel> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
    let version = value
        .get("format_version")
        .ok_or_else(|| Error::ModelFormat("missing format_version".into()))?
        .as_u64()
        .ok_or_else(|| Error::ModelFormat("format_version is not an unsigned integer".into()))?;
    if version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion {
            found: version,
            expected: FORMAT_VERSION,
        });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| Error::ModelFormat(e.to_string()))?;
    let model = TrainedModel {
        algorithm: file.algorithm,
        feature_order: file.feature_order,
        seed: file.seed,
        scaler: file.scaler,
        params: file.params,
        training_meta: file.training_meta,
    };
    if checksum(&model)? != file.checksum {
        return Err(Error::Checksum);
    }
    model.validate()?;
    Ok(model)
}

pub fn save_model(model: &TrainedModel, path: &Path) -> Result<()> {
    write_atomic(path, model_to_string(model)?.as_bytes())
}

pub fn load_model(path: &Path) -> Result<TrainedModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::LabeledDataset;

    fn model() -> TrainedModel {
        TrainedModel::new(
            Algorithm::NaiveBayes,
            17,
            Scaler::identity(),
            ModelParams::NaiveBayes {
                priors: [0.7, 0.30000000000000004],
                means: vec![vec![0.1, 0.2, 0.3, 0.4, 1.5, 0.6]; 2],
                variances: vec![vec![1.0 / 3.0, 2.0, 1e-9, 4.0, 5.0, 6.0]; 2],
            },
            TrainingMeta::from_dataset(&LabeledDataset::new(vec![]).unwrap()),
        )
    }

    #[test]
    fn round_trip_is_exact() {
        let m = model();
        let text = model_to_string(&m).unwrap();
        assert_eq!(model_from_str(&text).unwrap(), m);
        assert!(text.starts_with("{\n  \"format_version\": 1,"));
    }

    #[test]
    fn unknown_version() {
        let text = model_to_string(&model())
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(
            model_from_str(&text),
            Err(Error::UnsupportedVersion { found: 9, expected: 1 })
        ));
    }

    #[test]
    fn truncated_file() {
        let text = model_to_string(&model()).unwrap();
        assert!(matches!(
            model_from_str(&text[..text.len() / 2]),
            Err(Error::ModelFormat(_))
        ));
        assert!(matches!(model_from_str(""), Err(Error::ModelFormat(_))));
    }

    #[test]
    fn edited_parameter_fails_checksum() {
        let text = model_to_string(&model())
            .unwrap()
            .replace("\"seed\": 17", "\"seed\": 18");
        assert!(matches!(model_from_str(&text), Err(Error::Checksum)));
    }
}
