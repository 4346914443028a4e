use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: usize,
}

/// Labelled feature vectors of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    dim: usize,
    class_names: Vec<String>,
}

/// How [`Dataset::stratified_split`] sizes the two halves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Split {
    /// Fraction of every class that goes to the training half.
    Fraction(f64),
    /// Fixed number of training and test samples drawn from every class.
    PerClass { train: usize, test: usize },
}

impl Dataset {
    pub fn new(samples: Vec<Sample>, dim: usize, class_names: Vec<String>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != dim {
                return Err(Error::Dimension(format!(
                    "sample {i} has {} features, expected {dim}",
                    s.features.len()
                )));
            }
            if s.label >= class_names.len() {
                return Err(Error::Parameter(format!(
                    "sample {i} has label {} but only {} classes exist",
                    s.label,
                    class_names.len()
                )));
            }
        }
        Ok(Dataset {
            samples,
            dim,
            class_names,
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Number of samples carrying each label.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count()];
        for s in &self.samples {
            counts[s.label] += 1;
        }
        counts
    }

    /// Keeps only the listed original class ids and relabels them `0..classes.len()`
    /// in the order given.
    pub fn filter_classes(&self, classes: &[usize]) -> Result<Dataset> {
        if classes.is_empty() {
            return Err(Error::Config("class filter is empty".into()));
        }
        for (i, c) in classes.iter().enumerate() {
            if *c >= self.class_count() {
                return Err(Error::Config(format!(
                    "class {c} not present (dataset has {} classes)",
                    self.class_count()
                )));
            }
            if classes[..i].contains(c) {
                return Err(Error::Config(format!("class {c} listed twice")));
            }
        }
        let samples = self
            .samples
            .iter()
            .filter_map(|s| {
                classes
                    .iter()
                    .position(|&c| c == s.label)
                    .map(|label| Sample {
                        features: s.features.clone(),
                        label,
                    })
            })
            .collect();
        let names = classes
            .iter()
            .map(|&c| self.class_names[c].clone())
            .collect();
        Dataset::new(samples, self.dim, names)
    }

    /// Same labels, features replaced by `f(features)`.
    pub fn map_features<F>(&self, mut f: F) -> Result<Dataset>
    where
        F: FnMut(&[f64]) -> Result<Vec<f64>>,
    {
        let mut dim = None;
        let mut samples = Vec::with_capacity(self.len());
        for s in &self.samples {
            let features = f(&s.features)?;
            dim.get_or_insert(features.len());
            samples.push(Sample {
                features,
                label: s.label,
            });
        }
        Dataset::new(samples, dim.unwrap_or(0), self.class_names.clone())
    }

    /// Class-stratified split into (train, test), shuffled with `seed`.
    pub fn stratified_split(&self, split: Split, seed: u64) -> Result<(Dataset, Dataset)> {
        if let Split::Fraction(f) = split {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::Config(format!(
                    "split fraction {f} must lie in (0, 1)"
                )));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut train = Vec::new();
        let mut test = Vec::new();
        for class in 0..self.class_count() {
            let mut idx: Vec<usize> = (0..self.len())
                .filter(|&i| self.samples[i].label == class)
                .collect();
            idx.shuffle(&mut rng);
            let (n_train, n_test) = match split {
                Split::Fraction(f) => {
                    let n_train = (f * idx.len() as f64).round() as usize;
                    (n_train, idx.len() - n_train)
                }
                Split::PerClass { train, test } => {
                    if train + test > idx.len() {
                        return Err(Error::Config(format!(
                            "class `{}` has {} samples, {train}+{test} requested",
                            self.class_names[class],
                            idx.len()
                        )));
                    }
                    (train, test)
                }
            };
            train.extend(idx[..n_train].iter().map(|&i| self.samples[i].clone()));
            test.extend(
                idx[n_train..n_train + n_test]
                    .iter()
                    .map(|&i| self.samples[i].clone()),
            );
        }
        Ok((
            Dataset::new(train, self.dim, self.class_names.clone())?,
            Dataset::new(test, self.dim, self.class_names.clone())?,
        ))
    }
}
