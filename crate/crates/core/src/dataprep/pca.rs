use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use crate::error::{Error, Result};

/// Projection onto the leading eigenvectors of the sample covariance.
///
/// Components are unit rows ordered by descending eigenvalue; each is
/// sign-fixed so that its largest-magnitude coordinate is positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    mean: Vec<f64>,
    components: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    total_variance: f64,
}

pub fn pca_fit(data: &Dataset, k: usize) -> Result<PcaModel> {
    let d = data.dim();
    if k == 0 || k > d {
        return Err(Error::Parameter(format!("PCA rank {k} outside 1..={d}")));
    }
    let n = data.len();
    if n < 2 {
        return Err(Error::Parameter(format!(
            "PCA needs at least 2 samples, got {n}"
        )));
    }

    let mut mean = vec![0.0; d];
    for s in data.samples() {
        for (m, x) in mean.iter_mut().zip(&s.features) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let centered = DMatrix::from_fn(n, d, |i, j| data.samples()[i].features[j] - mean[j]);
    let cov = (centered.transpose() * &centered) / (n as f64 - 1.0);
    let total_variance = cov.trace();
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut components = Vec::with_capacity(k);
    let mut eigenvalues = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        let pivot = v.iter().enumerate().fold((0, 0.0f64), |best, (i, x)| {
            if x.abs() > best.1.abs() {
                (i, *x)
            } else {
                best
            }
        });
        if pivot.1 < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        eigenvalues.push(eig.eigenvalues[idx]);
    }
    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
        total_variance,
    })
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Share of total variance captured by the retained components.
    pub fn explained_variance_ratio(&self) -> f64 {
        if self.total_variance <= 0.0 {
            return 1.0;
        }
        self.eigenvalues.iter().sum::<f64>() / self.total_variance
    }

    pub fn transform_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim() {
            return Err(Error::Shape(format!(
                "PCA expects {} features, got {}",
                self.input_dim(),
                x.len()
            )));
        }
        Ok(self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(x)
                    .zip(&self.mean)
                    .map(|((c, x), m)| c * (x - m))
                    .sum()
            })
            .collect())
    }

    /// Maps projected coordinates back into the input space.
    pub fn inverse_row(&self, z: &[f64]) -> Result<Vec<f64>> {
        if z.len() != self.k() {
            return Err(Error::Shape(format!(
                "expected {} coordinates, got {}",
                self.k(),
                z.len()
            )));
        }
        let mut x = self.mean.clone();
        for (c, w) in self.components.iter().zip(z) {
            for (xi, ci) in x.iter_mut().zip(c) {
                *xi += w * ci;
            }
        }
        Ok(x)
    }

    pub fn transform(&self, data: &Dataset) -> Result<Dataset> {
        data.map_features(|x| self.transform_row(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataprep::Sample;

    fn dataset(rows: &[Vec<f64>]) -> Dataset {
        let samples = rows
            .iter()
            .map(|r| Sample {
                features: r.clone(),
                label: 0,
            })
            .collect();
        Dataset::new(samples, rows[0].len(), vec!["x".into()]).unwrap()
    }

    #[test]
    fn line_data_is_rank_one() {
        let rows: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![i as f64, 3.0 * i as f64 - 2.0])
            .collect();
        let m = pca_fit(&dataset(&rows), 1).unwrap();
        assert!((m.explained_variance_ratio() - 1.0).abs() < 1e-9);
        let c = &m.components()[0];
        // sign convention: largest entry positive
        assert!(c[1] > 0.0 && c[0] > 0.0);
    }

    #[test]
    fn full_rank_round_trip() {
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|i| {
                let t = i as f64;
                vec![t.sin(), (1.3 * t).cos(), t * t / 50.0]
            })
            .collect();
        let m = pca_fit(&dataset(&rows), 3).unwrap();
        for r in &rows {
            let back = m.inverse_row(&m.transform_row(r).unwrap()).unwrap();
            for (a, b) in back.iter().zip(r) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn argument_checks() {
        let rows = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert!(matches!(
            pca_fit(&dataset(&rows), 3),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            pca_fit(&dataset(&rows[..1]), 1),
            Err(Error::Parameter(_))
        ));
        let m = pca_fit(&dataset(&rows), 1).unwrap();
        assert!(matches!(m.transform_row(&[1.0]), Err(Error::Shape(_))));
    }
}
