use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

/// Per-dimension min/max of the fitting split.
///
/// Values map to `(x - min) / (max - min)` clamped to `[0, 1]`; a constant
/// dimension (`max == min`) maps to 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormStats {
    min: Vec<f64>,
    max: Vec<f64>,
}

pub fn fit_norm(data: &Dataset) -> Result<NormStats> {
    if data.is_empty() {
        return Err(Error::Parameter(
            "cannot fit normalisation on an empty dataset".into(),
        ));
    }
    let mut min = vec![f64::INFINITY; data.dim()];
    let mut max = vec![f64::NEG_INFINITY; data.dim()];
    for s in data.samples() {
        for (j, &x) in s.features.iter().enumerate() {
            min[j] = min[j].min(x);
            max[j] = max[j].max(x);
        }
    }
    Ok(NormStats { min, max })
}

impl NormStats {
    pub fn dim(&self) -> usize {
        self.min.len()
    }

    pub fn min(&self) -> &[f64] {
        &self.min
    }

    pub fn max(&self) -> &[f64] {
        &self.max
    }

    pub fn normalize_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Shape(format!(
                "normalisation fitted on {} dimensions, got {}",
                self.dim(),
                x.len()
            )));
        }
        Ok(x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                if hi > lo {
                    ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect())
    }

    pub fn normalize(&self, data: &Dataset) -> Result<Dataset> {
        data.map_features(|x| self.normalize_row(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::Sample;

    fn column(values: &[f64]) -> Dataset {
        let samples = values
            .iter()
            .map(|&v| Sample {
                features: vec![v, 7.0],
                label: 0,
            })
            .collect();
        Dataset::new(samples, 2, vec!["c".into()]).unwrap()
    }

    #[test]
    fn maps_to_unit_interval() {
        let d = column(&[2.0, 4.0, 6.0]);
        let stats = fit_norm(&d).unwrap();
        let out = stats.normalize(&d).unwrap();
        let got: Vec<f64> = out.samples().iter().map(|s| s.features[0]).collect();
        assert_eq!(got, vec![0.0, 0.5, 1.0]);
        // constant second column
        assert!(out.samples().iter().all(|s| s.features[1] == 0.0));
    }

    #[test]
    fn unseen_values_clamp() {
        let stats = fit_norm(&column(&[2.0, 4.0, 6.0])).unwrap();
        assert_eq!(stats.normalize_row(&[1.0, 7.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(stats.normalize_row(&[9.0, 8.0]).unwrap(), vec![1.0, 0.0]);
        assert!(matches!(stats.normalize_row(&[1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn empty_dataset() {
        let d = Dataset::new(vec![], 2, vec!["c".into()]).unwrap();
        assert!(fit_norm(&d).is_err());
    }
}
