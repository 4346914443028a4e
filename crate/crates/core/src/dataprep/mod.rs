//! Dataset ingestion, PCA, min-max normalisation and angle encoding.
//!
//! The feature pipeline is `raw → [PCA] → min-max → angles`. Both the PCA and
//! the normalisation bounds are fitted on the training split only; unseen data
//! is clamped into `[0, 1]` before encoding.

mod dataset;
mod encode;
mod iris;
pub mod mnist;
mod norm;
mod pca;

use serde::{Deserialize, Serialize};

pub use dataset::{Dataset, Sample, Split};
pub use encode::{build_data_circuit, encode, feature_angle, EncodeMode, EncodedSample};
pub use iris::{load_iris, parse_iris};
pub use mnist::load_mnist;
pub use norm::{fit_norm, NormStats};
pub use pca::{pca_fit, PcaModel};

use crate::error::{Error, Result};

/// Fitted feature pipeline carried alongside a trained model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preprocessor {
    pca: Option<PcaModel>,
    norm: NormStats,
    encode: EncodeMode,
}

impl Preprocessor {
    pub fn fit(train: &Dataset, pca_k: Option<usize>, encode: EncodeMode) -> Result<Self> {
        let pca = pca_k.map(|k| pca_fit(train, k)).transpose()?;
        let reduced = match &pca {
            Some(p) => p.transform(train)?,
            None => train.clone(),
        };
        let norm = fit_norm(&reduced)?;
        Ok(Preprocessor { pca, norm, encode })
    }

    pub fn from_parts(pca: Option<PcaModel>, norm: NormStats, encode: EncodeMode) -> Result<Self> {
        if let Some(p) = &pca {
            if p.k() != norm.dim() {
                return Err(Error::Shape(format!(
                    "PCA yields {} features but normalisation expects {}",
                    p.k(),
                    norm.dim()
                )));
            }
        }
        Ok(Preprocessor { pca, norm, encode })
    }

    pub fn pca(&self) -> Option<&PcaModel> {
        self.pca.as_ref()
    }

    pub fn norm(&self) -> &NormStats {
        &self.norm
    }

    pub fn encode_mode(&self) -> EncodeMode {
        self.encode
    }

    /// Raw feature count accepted by [`Preprocessor::features`].
    pub fn input_dim(&self) -> usize {
        self.pca
            .as_ref()
            .map_or(self.norm.dim(), PcaModel::input_dim)
    }

    /// Feature count after reduction, i.e. the dimension that is encoded.
    pub fn encoded_dim(&self) -> usize {
        self.norm.dim()
    }

    pub fn data_qubits(&self) -> usize {
        self.encode.data_qubits(self.encoded_dim())
    }

    /// Reduced and normalised features of one raw sample.
    pub fn features(&self, raw: &[f64]) -> Result<Vec<f64>> {
        if raw.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "sample has {} features, model expects {}",
                raw.len(),
                self.input_dim()
            )));
        }
        match &self.pca {
            Some(p) => self.norm.normalize_row(&p.transform_row(raw)?),
            None => self.norm.normalize_row(raw),
        }
    }

    pub fn encode(&self, raw: &[f64], label: usize) -> Result<EncodedSample> {
        encode(&self.features(raw)?, label, self.encode)
    }

    pub fn encode_dataset(&self, data: &Dataset) -> Result<Vec<EncodedSample>> {
        data.samples()
            .iter()
            .map(|s| self.encode(&s.features, s.label))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_with_pca() {
        let samples = (0..20)
            .map(|i| {
                let t = i as f64;
                Sample {
                    features: vec![t, 2.0 * t + (t * 0.7).sin(), (t * 0.3).cos()],
                    label: i % 2,
                }
            })
            .collect();
        let d = Dataset::new(samples, 3, vec!["a".into(), "b".into()]).unwrap();
        let p = Preprocessor::fit(&d, Some(2), EncodeMode::TwoPerQubit).unwrap();
        assert_eq!((p.input_dim(), p.encoded_dim(), p.data_qubits()), (3, 2, 1));
        for s in p.encode_dataset(&d).unwrap() {
            assert_eq!(s.angles.len(), 1);
            assert!(s
                .angles
                .iter()
                .all(|&(a, b)| (0.0..=std::f64::consts::PI).contains(&a)
                    && (0.0..=std::f64::consts::PI).contains(&b)));
        }
        assert!(matches!(p.features(&[1.0, 2.0]), Err(Error::Shape(_))));
        // far outside the fitted range still encodes (clamped)
        assert!(p.encode(&[1e6, -1e6, 3.0], 0).is_ok());
    }
}
