//! Versioned JSON checkpoints.
//!
//! Floats are written in shortest round-trip form, so a reloaded model is
//! bit-identical to the one that was saved. Training history and timings are
//! not stored; two runs with the same configuration and seed produce the same
//! file byte for byte.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataprep::{EncodeMode, NormStats, PcaModel, Preprocessor};
use crate::error::{Error, Result};
use crate::model::{ClassModel, LayerStack};
use crate::trainer::{TrainConfig, TrainedModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub encode_mode: EncodeMode,
    pub stack: LayerStack,
    pub theta: Vec<Vec<f64>>,
    pub norm: NormStats,
    pub pca: Option<PcaModel>,
    pub class_labels: Vec<String>,
    pub config: TrainConfig,
}

impl Checkpoint {
    pub fn from_model(model: &TrainedModel) -> Result<Self> {
        let stack = model
            .classes
            .first()
            .ok_or_else(|| Error::Checkpoint("model has no classes".into()))?
            .stack()
            .clone();
        Ok(Checkpoint {
            format_version: FORMAT_VERSION,
            encode_mode: model.preprocessor.encode_mode(),
            stack,
            theta: model.classes.iter().map(|c| c.theta().to_vec()).collect(),
            norm: model.preprocessor.norm().clone(),
            pca: model.preprocessor.pca().cloned(),
            class_labels: model.class_names.clone(),
            config: model.config.clone(),
        })
    }

    pub fn into_model(self) -> Result<TrainedModel> {
        let bad = |e: Error| Error::Checkpoint(e.to_string());
        if self.theta.is_empty() {
            return Err(Error::Checkpoint("no class parameters".into()));
        }
        if self.class_labels.len() != self.theta.len() {
            return Err(Error::Checkpoint(format!(
                "{} class labels for {} parameter vectors",
                self.class_labels.len(),
                self.theta.len()
            )));
        }
        let preprocessor =
            Preprocessor::from_parts(self.pca, self.norm, self.encode_mode).map_err(bad)?;
        if preprocessor.data_qubits() != self.stack.n_state_qubits() {
            return Err(Error::Checkpoint(format!(
                "pipeline yields {} data qubits, stack expects {}",
                preprocessor.data_qubits(),
                self.stack.n_state_qubits()
            )));
        }
        let stack = LayerStack::new(
            self.stack.layers().to_vec(),
            self.stack.n_state_qubits(),
            self.stack.pairing(),
        )
        .map_err(bad)?;
        let classes = self
            .theta
            .into_iter()
            .enumerate()
            .map(|(c, theta)| ClassModel::new(stack.clone(), theta, c).map_err(bad))
            .collect::<Result<Vec<_>>>()?;
        Ok(TrainedModel {
            classes,
            preprocessor,
            class_names: self.class_labels,
            config: self.config,
            history: Vec::new(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    /// Parses a checkpoint, checking the format version before anything else.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Checkpoint(format!("not valid JSON: {e}")))?;
        let found = value
            .get("format_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Checkpoint("missing format_version".into()))?;
        if found != u64::from(FORMAT_VERSION) {
            return Err(Error::Incompatible {
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: FORMAT_VERSION,
            });
        }
        serde_json::from_value(value).map_err(|e| Error::Checkpoint(e.to_string()))
    }
}

pub fn to_json(model: &TrainedModel) -> Result<String> {
    Checkpoint::from_model(model)?.to_json()
}

pub fn from_json(text: &str) -> Result<TrainedModel> {
    Checkpoint::from_json(text)?.into_model()
}

pub fn save(model: &TrainedModel, path: impl AsRef<Path>) -> Result<()> {
    let mut text = to_json(model)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<TrainedModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Checkpoint(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}
