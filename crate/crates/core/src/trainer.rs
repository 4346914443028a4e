//! Cross-entropy-of-fidelity training and softmax inference.
//!
//! Each class owns one [`ClassModel`]. For every epoch `ε` (1-based), every
//! class and every training sample of that class, each parameter in turn is
//! moved by `-α·g` where
//!
//! ```text
//! g = ½ · (C(θ_i + s) − C(θ_i − s)),   s = π / (2·√ε),   C = −y·ln p − (1−y)·ln(1−p)
//! ```
//!
//! and `p` is the clipped SWAP-test fidelity between the sample's data state
//! and the class's learned state. Updates are applied immediately
//! (coordinate-wise) unless `synchronous` is set.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataprep::{build_data_circuit, Dataset, EncodeMode, EncodedSample, Preprocessor};
use crate::error::{Error, Result};
use crate::fidelity::{self, estimate_registers, FidelityMode};
use crate::model::{ClassModel, LayerStack, Pairing};
use crate::statevec::Statevector;

/// Fidelity evaluation used during training.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ShotsMode {
    #[default]
    Exact,
    Shots(u64),
}

impl fmt::Display for ShotsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShotsMode::Exact => f.write_str("exact"),
            ShotsMode::Shots(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for ShotsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(ShotsMode::Exact);
        }
        match s.parse::<u64>() {
            Ok(n) if n > 0 => Ok(ShotsMode::Shots(n)),
            _ => Err(Error::Config(format!(
                "shots must be `exact` or a positive count, got `{s}`"
            ))),
        }
    }
}

impl Serialize for ShotsMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ShotsMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub shots: ShotsMode,
    pub seed: u64,
    pub stack: String,
    pub pairing: Pairing,
    pub encode: EncodeMode,
    pub pca: Option<usize>,
    pub negative_sampling: bool,
    /// Compute all of a sample's gradients at fixed θ, then apply them.
    pub synchronous: bool,
    /// Worker threads for synchronous gradients and evaluation.
    pub jobs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.01,
            epochs: 25,
            shots: ShotsMode::Exact,
            seed: 0,
            stack: "QC-S".into(),
            pairing: Pairing::Chain,
            encode: EncodeMode::TwoPerQubit,
            pca: None,
            negative_sampling: false,
            synchronous: false,
            jobs: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::Config(format!(
                "learning rate must be a finite non-negative number, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        crate::model::parse_layers(&self.stack)?;
        Ok(())
    }
}

/// One line of the metrics stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub class_loss: Vec<f64>,
    pub mean_loss: f64,
    pub train_accuracy: f64,
    pub eval_accuracy: Option<f64>,
    pub wall_ms: f64,
}

/// Per-class learned states plus the feature pipeline that feeds them.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub classes: Vec<ClassModel>,
    pub preprocessor: Preprocessor,
    pub class_names: Vec<String>,
    pub config: TrainConfig,
    pub history: Vec<EpochMetrics>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub class: usize,
    pub probabilities: Vec<f64>,
    pub fidelities: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<usize>>,
    pub n: usize,
}

/// Cross-entropy of a fidelity against a 0/1 target, after clipping.
pub fn sample_loss(fidelity: f64, y: f64) -> f64 {
    let p = fidelity::clip(fidelity);
    -y * p.ln() - (1.0 - y) * (1.0 - p).ln()
}

/// Shift width `π / (2√ε)` for 1-based epoch `ε`.
pub fn shift(epoch: usize) -> Result<f64> {
    if epoch == 0 {
        return Err(Error::Parameter("epoch index is 1-based".into()));
    }
    Ok(PI / (2.0 * (epoch as f64).sqrt()))
}

/// Data-register state for an encoded sample.
pub fn data_state(sample: &EncodedSample) -> Result<Statevector> {
    Statevector::zero(sample.n_qubits())?.run(&build_data_circuit(sample, 0))
}

/// Loss of `model` on a prepared data state.
pub fn cost(model: &ClassModel, data: &Statevector, y: f64, mode: FidelityMode) -> Result<f64> {
    let learned = model.state()?;
    Ok(sample_loss(
        estimate_registers(data, &learned, mode)?.fidelity,
        y,
    ))
}

/// Shift-rule gradient for parameter `index` at epoch `epoch` with target `y`.
///
/// Exactly two fidelity estimates are made; in shot mode they use seeds
/// derived from the mode's seed.
pub fn grad_param_with_target(
    model: &ClassModel,
    data: &Statevector,
    y: f64,
    index: usize,
    epoch: usize,
    mode: FidelityMode,
) -> Result<f64> {
    if index >= model.theta().len() {
        return Err(Error::Parameter(format!(
            "parameter {index} out of {}",
            model.theta().len()
        )));
    }
    let s = shift(epoch)?;
    let (fwd_mode, bck_mode) = match mode {
        FidelityMode::Exact => (mode, mode),
        FidelityMode::Shots { shots, seed } => (
            FidelityMode::Shots {
                shots,
                seed: mix(&[seed, 0]),
            },
            FidelityMode::Shots {
                shots,
                seed: mix(&[seed, 1]),
            },
        ),
    };
    let fwd = cost(&model.shifted(index, s), data, y, fwd_mode)?;
    let bck = cost(&model.shifted(index, -s), data, y, bck_mode)?;
    Ok(0.5 * (fwd - bck))
}

/// [`grad_param_with_target`] for the class's own samples (`y = 1`).
pub fn grad_param(
    model: &ClassModel,
    sample: &EncodedSample,
    index: usize,
    epoch: usize,
    mode: FidelityMode,
) -> Result<f64> {
    grad_param_with_target(model, &data_state(sample)?, 1.0, index, epoch, mode)
}

/// Softmax with max-subtraction.
pub fn softmax(values: &[f64]) -> Vec<f64> {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = values.iter().map(|v| (v - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Builds the pipeline on `train`, trains one model per class and records
/// per-epoch metrics (evaluated on `eval` when given).
pub fn fit(
    config: &TrainConfig,
    train_set: &Dataset,
    eval: Option<&Dataset>,
) -> Result<TrainedModel> {
    fit_with(config, train_set, eval, |_| {})
}

pub fn fit_with<F>(
    config: &TrainConfig,
    train_set: &Dataset,
    eval: Option<&Dataset>,
    on_epoch: F,
) -> Result<TrainedModel>
where
    F: FnMut(&EpochMetrics),
{
    config.validate()?;
    let preprocessor = Preprocessor::fit(train_set, config.pca, config.encode)?;
    let encoded = preprocessor.encode_dataset(train_set)?;
    let eval_encoded = eval.map(|e| preprocessor.encode_dataset(e)).transpose()?;
    let (classes, history) = train(
        config,
        &encoded,
        train_set.class_count(),
        eval_encoded.as_deref(),
        on_epoch,
    )?;
    Ok(TrainedModel {
        classes,
        preprocessor,
        class_names: train_set.class_names().to_vec(),
        config: config.clone(),
        history,
    })
}

/// Fits the pipeline on `train_set` and attaches freshly initialised class
/// models without running any epochs.
pub fn untrained(config: &TrainConfig, train_set: &Dataset) -> Result<TrainedModel> {
    config.validate()?;
    let preprocessor = Preprocessor::fit(train_set, config.pca, config.encode)?;
    let classes = init_models(config, preprocessor.data_qubits(), train_set.class_count())?;
    Ok(TrainedModel {
        classes,
        preprocessor,
        class_names: train_set.class_names().to_vec(),
        config: config.clone(),
        history: Vec::new(),
    })
}

/// Fresh, untrained per-class models for the given pipeline.
pub fn init_models(
    config: &TrainConfig,
    n_state_qubits: usize,
    class_count: usize,
) -> Result<Vec<ClassModel>> {
    let stack = LayerStack::parse(&config.stack, n_state_qubits, config.pairing)?;
    Ok((0..class_count)
        .map(|c| ClassModel::init(stack.clone(), c, mix(&[config.seed, c as u64, 0x1a17])))
        .collect())
}

/// Core training loop over already-encoded samples.
pub fn train<F>(
    config: &TrainConfig,
    samples: &[EncodedSample],
    class_count: usize,
    eval: Option<&[EncodedSample]>,
    on_epoch: F,
) -> Result<(Vec<ClassModel>, Vec<EpochMetrics>)>
where
    F: FnMut(&EpochMetrics),
{
    config.validate()?;
    if class_count < 2 {
        return Err(Error::Config(format!(
            "need at least 2 classes, got {class_count}"
        )));
    }
    let n_qubits = samples
        .first()
        .ok_or_else(|| Error::Config("training set is empty".into()))?
        .n_qubits();
    let models = init_models(config, n_qubits, class_count)?;
    train_from(config, models, samples, eval, on_epoch)
}

/// [`train`] starting from the given per-class models (indexed by label).
pub fn train_from<F>(
    config: &TrainConfig,
    mut models: Vec<ClassModel>,
    samples: &[EncodedSample],
    eval: Option<&[EncodedSample]>,
    mut on_epoch: F,
) -> Result<(Vec<ClassModel>, Vec<EpochMetrics>)>
where
    F: FnMut(&EpochMetrics),
{
    config.validate()?;
    let class_count = models.len();
    let n_qubits = models
        .first()
        .ok_or_else(|| Error::Config("no class models".into()))?
        .stack()
        .n_state_qubits();
    if samples.iter().any(|s| s.n_qubits() != n_qubits) {
        return Err(Error::Shape(format!(
            "encoded samples must use {n_qubits} qubits"
        )));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for (i, s) in samples.iter().enumerate() {
        by_class
            .get_mut(s.label)
            .ok_or_else(|| Error::Config(format!("label {} out of range", s.label)))?
            .push(i);
    }
    if let Some(c) = by_class.iter().position(Vec::is_empty) {
        return Err(Error::Config(format!("class {c} has no training samples")));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let states = samples.iter().map(data_state).collect::<Result<Vec<_>>>()?;
    let eval_states = eval
        .map(|e| {
            e.iter()
                .map(|s| Ok((data_state(s)?, s.label)))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    let mut history = Vec::with_capacity(config.epochs);

    for epoch in 1..=config.epochs {
        let started = Instant::now();
        for (class, members) in by_class.iter().enumerate() {
            let mut order = members.clone();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(mix(&[
                config.seed,
                epoch as u64,
                class as u64,
            ])));
            for &idx in &order {
                let mut targets = vec![(class, 1.0)];
                if config.negative_sampling {
                    targets.extend((0..class_count).filter(|&o| o != class).map(|o| (o, 0.0)));
                }
                for (target, y) in targets {
                    let call_seed = mix(&[config.seed, epoch as u64, idx as u64, target as u64]);
                    let step = StepContext {
                        data: &states[idx],
                        y,
                        epoch,
                        shots: config.shots,
                        seed: call_seed,
                        lr: config.learning_rate,
                    };
                    if config.synchronous {
                        pool.install(|| step.apply_synchronous(&mut models[target]))?;
                    } else {
                        step.apply_coordinatewise(&mut models[target])?;
                    }
                }
            }
        }

        let learned = models
            .iter()
            .map(ClassModel::state)
            .collect::<Result<Vec<_>>>()?;
        let class_loss = (0..class_count)
            .map(|c| {
                let total = by_class[c]
                    .iter()
                    .map(|&i| {
                        let est = estimate_registers(&states[i], &learned[c], FidelityMode::Exact)?;
                        Ok(sample_loss(est.fidelity, 1.0))
                    })
                    .sum::<Result<f64>>()?;
                Ok(total / by_class[c].len() as f64)
            })
            .collect::<Result<Vec<_>>>()?;
        let labelled: Vec<(&Statevector, usize)> = states
            .iter()
            .zip(samples)
            .map(|(s, e)| (s, e.label))
            .collect();
        let train_accuracy = pool.install(|| accuracy_of(&learned, &labelled))?;
        let eval_accuracy = eval_states
            .as_ref()
            .map(|ev| {
                let labelled: Vec<(&Statevector, usize)> =
                    ev.iter().map(|(s, l)| (s, *l)).collect();
                pool.install(|| accuracy_of(&learned, &labelled))
            })
            .transpose()?;
        let metrics = EpochMetrics {
            epoch,
            mean_loss: class_loss.iter().sum::<f64>() / class_count as f64,
            class_loss,
            train_accuracy,
            eval_accuracy,
            wall_ms: started.elapsed().as_secs_f64() * 1e3,
        };
        on_epoch(&metrics);
        history.push(metrics);
    }
    Ok((models, history))
}

struct StepContext<'a> {
    data: &'a Statevector,
    y: f64,
    epoch: usize,
    shots: ShotsMode,
    seed: u64,
    lr: f64,
}

impl StepContext<'_> {
    fn mode(&self, param: usize) -> FidelityMode {
        match self.shots {
            ShotsMode::Exact => FidelityMode::Exact,
            ShotsMode::Shots(shots) => FidelityMode::Shots {
                shots,
                seed: mix(&[self.seed, param as u64]),
            },
        }
    }

    fn apply_coordinatewise(&self, model: &mut ClassModel) -> Result<()> {
        for i in 0..model.theta().len() {
            let g = grad_param_with_target(model, self.data, self.y, i, self.epoch, self.mode(i))?;
            let updated = model.theta()[i] - self.lr * g;
            model.set_param(i, updated);
        }
        Ok(())
    }

    fn apply_synchronous(&self, model: &mut ClassModel) -> Result<()> {
        let frozen: &ClassModel = model;
        let grads = (0..frozen.theta().len())
            .into_par_iter()
            .map(|i| grad_param_with_target(frozen, self.data, self.y, i, self.epoch, self.mode(i)))
            .collect::<Result<Vec<_>>>()?;
        for (i, g) in grads.into_iter().enumerate() {
            let updated = model.theta()[i] - self.lr * g;
            model.set_param(i, updated);
        }
        Ok(())
    }
}

fn fidelities(learned: &[Statevector], data: &Statevector) -> Result<Vec<f64>> {
    learned
        .iter()
        .map(|l| Ok(estimate_registers(data, l, FidelityMode::Exact)?.fidelity))
        .collect()
}

fn accuracy_of(learned: &[Statevector], labelled: &[(&Statevector, usize)]) -> Result<f64> {
    if labelled.is_empty() {
        return Err(Error::Parameter("accuracy of an empty set".into()));
    }
    let hits = labelled
        .par_iter()
        .map(|(s, label)| Ok(usize::from(argmax(&fidelities(learned, s)?) == *label)))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.iter().sum::<usize>() as f64 / labelled.len() as f64)
}

impl TrainedModel {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn learned_states(&self) -> Result<Vec<Statevector>> {
        self.classes.iter().map(ClassModel::state).collect()
    }

    /// Per-class fidelity, softmaxed; argmax with lowest-id tie-break.
    pub fn predict(&self, raw: &[f64]) -> Result<Prediction> {
        self.predict_with_states(&self.learned_states()?, raw)
    }

    pub fn predict_with_states(&self, learned: &[Statevector], raw: &[f64]) -> Result<Prediction> {
        let encoded = self.preprocessor.encode(raw, 0)?;
        let fidelities = fidelities(learned, &data_state(&encoded)?)?;
        Ok(prediction_from_fidelities(fidelities))
    }

    pub fn evaluate(&self, data: &Dataset) -> Result<f64> {
        Ok(self.evaluate_detailed(data)?.accuracy)
    }

    pub fn evaluate_detailed(&self, data: &Dataset) -> Result<Evaluation> {
        if data.is_empty() {
            return Err(Error::Parameter(
                "cannot evaluate on an empty dataset".into(),
            ));
        }
        if data.class_count() > self.class_count() {
            return Err(Error::Shape(format!(
                "dataset has {} classes, model has {}",
                data.class_count(),
                self.class_count()
            )));
        }
        let learned = self.learned_states()?;
        let predicted = data
            .samples()
            .par_iter()
            .map(|s| Ok(self.predict_with_states(&learned, &s.features)?.class))
            .collect::<Result<Vec<_>>>()?;
        let k = self.class_count();
        let mut confusion = vec![vec![0usize; k]; k];
        let mut hits = 0;
        for (s, p) in data.samples().iter().zip(predicted) {
            confusion[s.label][p] += 1;
            hits += usize::from(s.label == p);
        }
        Ok(Evaluation {
            accuracy: hits as f64 / data.len() as f64,
            confusion,
            n: data.len(),
        })
    }
}

pub fn prediction_from_fidelities(fidelities: Vec<f64>) -> Prediction {
    Prediction {
        class: argmax(&fidelities),
        probabilities: softmax(&fidelities),
        fidelities,
    }
}

pub fn predict(trained: &TrainedModel, raw: &[f64]) -> Result<Prediction> {
    trained.predict(raw)
}

pub fn evaluate(trained: &TrainedModel, data: &Dataset) -> Result<f64> {
    trained.evaluate(data)
}

/// SplitMix64 fold over `parts`; used to derive independent per-call seeds.
pub fn mix(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h ^= p;
        h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = h;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}
