use std::fs::{self, File};
use std::io::{BufWriter, Write};

use serde_json::json;

use qclass::checkpoint;
use qclass::dataprep::{build_data_circuit, load_iris, load_mnist, Dataset, Split};
use qclass::fidelity::build_swap_test;
use qclass::trainer::{self, TrainConfig, TrainedModel};
use qclass::{Error, Result};

macro_rules! out {
    ($($t:tt)*) => {
        writeln!(std::io::stdout().lock(), $($t)*)?
    };
}

use crate::args::{
    DataArgs, DatasetKind, EvalArgs, InitArgs, InspectArgs, ModelArgs, PredictArgs, Subset,
    TrainArgs,
};

fn load_dataset(args: &DataArgs) -> Result<Dataset> {
    let data = match args.dataset {
        DatasetKind::Iris => load_iris(&args.iris_path)?,
        DatasetKind::Mnist => load_mnist(&args.mnist_images, &args.mnist_labels)?,
    };
    match &args.classes {
        Some(c) => data.filter_classes(c),
        None => Ok(data),
    }
}

fn split(args: &DataArgs, data: &Dataset, seed: u64) -> Result<(Dataset, Dataset)> {
    let split = match (args.train_per_class, args.test_per_class) {
        (Some(train), test) => {
            let smallest = data.class_counts().into_iter().min().unwrap_or(0);
            Split::PerClass {
                train,
                test: test.unwrap_or(smallest.saturating_sub(train)),
            }
        }
        (None, Some(_)) => {
            return Err(Error::Config(
                "--test-per-class needs --train-per-class".into(),
            ));
        }
        (None, None) => Split::Fraction(args.split),
    };
    data.stratified_split(split, seed)
}

fn config_from(model: &ModelArgs) -> TrainConfig {
    TrainConfig {
        seed: model.seed,
        stack: model.stack.clone(),
        pairing: model.pairing,
        encode: model.encode,
        pca: model.pca,
        ..TrainConfig::default()
    }
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let config = TrainConfig {
        learning_rate: args.lr,
        epochs: args.epochs,
        shots: args.shots,
        negative_sampling: args.negative_sampling,
        synchronous: args.synchronous,
        jobs: args.jobs,
        ..config_from(&args.model)
    };
    config.validate()?;
    let data = load_dataset(&args.data)?;
    let (train_set, test_set) = split(&args.data, &data, config.seed)?;
    let eval = (!test_set.is_empty()).then_some(&test_set);

    let mut metrics = args
        .metrics_out
        .as_ref()
        .map(|p| File::create(p).map(BufWriter::new))
        .transpose()?;
    let mut write_err = None;
    let model = trainer::fit_with(&config, &train_set, eval, |m| {
        if let Some(w) = metrics.as_mut() {
            let line = serde_json::to_string(m).expect("metrics serialise");
            if let Err(e) = writeln!(w, "{line}").and_then(|_| w.flush()) {
                write_err.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    checkpoint::save(&model, &args.out)?;

    let train_acc = model.evaluate(&train_set)?;
    let eval_acc = eval.map(|e| model.evaluate(e)).transpose()?;
    let wall_ms: f64 = model.history.iter().map(|m| m.wall_ms).sum();
    if args.json {
        let out = json!({
            "train_accuracy": train_acc,
            "eval_accuracy": eval_acc,
            "n_train": train_set.len(),
            "n_eval": test_set.len(),
            "parameters": model.classes.iter().map(|c| c.theta().len()).sum::<usize>(),
            "qubits": 1 + 2 * model.preprocessor.data_qubits(),
            "wall_ms": wall_ms,
        });
        out!("{out}");
    } else {
        out!(
            "train accuracy: {train_acc:.4} ({} samples)",
            train_set.len()
        );
        match eval_acc {
            Some(a) => out!("eval accuracy: {a:.4} ({} samples)", test_set.len()),
            None => out!("eval accuracy: n/a (empty test split)"),
        }
        out!("checkpoint: {}", args.out.display());
    }
    Ok(())
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let model = checkpoint::load(&args.model)?;
    let data = load_dataset(&args.data)?;
    let seed = args.seed.unwrap_or(model.config.seed);
    let subset = match args.subset {
        Subset::All => data,
        Subset::Train => split(&args.data, &data, seed)?.0,
        Subset::Test => split(&args.data, &data, seed)?.1,
    };
    let pool = rayon_pool(args.jobs)?;
    let ev = pool.install(|| model.evaluate_detailed(&subset))?;
    if args.json {
        out!(
            "{}",
            serde_json::to_string(&ev).expect("evaluation serialises")
        );
    } else {
        let hits: usize = (0..ev.confusion.len()).map(|c| ev.confusion[c][c]).sum();
        out!("accuracy: {:.4} ({hits}/{})", ev.accuracy, ev.n);
        out!("confusion (rows = true, columns = predicted):");
        for (c, row) in ev.confusion.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|n| format!("{n:>5}")).collect();
            out!("{:>12} {}", label(&model, c), cells.join(""));
        }
    }
    Ok(())
}

fn rayon_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        return Err(Error::Config("jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))
}

fn label(model: &TrainedModel, class: usize) -> &str {
    model.class_names.get(class).map_or("?", String::as_str)
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("`{}`: {e}", t.trim()),
            })
        })
        .collect()
}

pub fn predict(args: &PredictArgs) -> Result<()> {
    let model = checkpoint::load(&args.model)?;
    let rows: Vec<Vec<f64>> = match (&args.row, &args.input) {
        (Some(r), _) => vec![parse_row(r, 1)?],
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            let mut rows = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                match parse_row(line, i + 1) {
                    Ok(r) => rows.push(r),
                    // a non-numeric first line is a header
                    Err(_) if rows.is_empty() && i == 0 => {}
                    Err(e) => return Err(e),
                }
            }
            rows
        }
        (None, None) => return Err(Error::Config("give --row or --input".into())),
    };
    if rows.is_empty() {
        return Err(Error::Format("no feature rows to predict".into()));
    }

    let learned = model.learned_states()?;
    for row in &rows {
        let p = model.predict_with_states(&learned, row)?;
        if args.json {
            let out = json!({
                "class": p.class,
                "label": label(&model, p.class),
                "probabilities": p.probabilities,
                "fidelities": p.fidelities,
            });
            out!("{out}");
        } else {
            let probs: Vec<String> = p.probabilities.iter().map(|q| format!("{q:.6}")).collect();
            out!(
                "class {} ({}) probabilities [{}]",
                p.class,
                label(&model, p.class),
                probs.join(", ")
            );
        }
    }

    if let Some(path) = &args.dump_circuit {
        let encoded = model.preprocessor.encode(&rows[0], 0)?;
        let n = encoded.n_qubits();
        let test = build_swap_test(
            &build_data_circuit(&encoded, 1),
            &model.classes[0].circuit(1 + n),
            n,
        )?;
        fs::write(path, test.circuit().to_text())?;
    }
    Ok(())
}

pub fn inspect(args: &InspectArgs) -> Result<()> {
    let model = checkpoint::load(&args.model)?;
    let n = model.preprocessor.data_qubits();
    if let Some(q) = args.qubit {
        if q >= n {
            return Err(Error::Index(format!(
                "qubit {q} outside the {n}-qubit state register"
            )));
        }
    }
    let qubits: Vec<usize> = match args.qubit {
        Some(q) => vec![q],
        None => (0..n).collect(),
    };
    let mut classes = Vec::new();
    for (c, (cm, state)) in model
        .classes
        .iter()
        .zip(model.learned_states()?)
        .enumerate()
    {
        let marginals = qubits
            .iter()
            .map(|&q| {
                let p0 = state.prob_of(q, 0)?;
                let p1 = state.prob_of(q, 1)?;
                Ok(json!({ "qubit": q, "p0": p0, "p1": p1, "z": p0 - p1 }))
            })
            .collect::<Result<Vec<_>>>()?;
        let amps: Vec<[f64; 2]> = state.amplitudes().iter().map(|a| [a.re, a.im]).collect();
        let probs: Vec<f64> = state.amplitudes().iter().map(|a| a.norm_sqr()).collect();
        classes.push(json!({
            "class": c,
            "label": label(&model, c),
            "theta": cm.theta(),
            "amplitudes": amps,
            "probabilities": probs,
            "marginals": marginals,
        }));
    }
    let stack = model.classes.first().map(|c| c.stack().layer_string());
    let doc = json!({
        "stack": stack,
        "n_state_qubits": n,
        "classes": classes,
    });
    let text = serde_json::to_string_pretty(&doc).expect("inspect output serialises");
    match &args.out {
        Some(p) => fs::write(p, text + "\n")?,
        None => out!("{text}"),
    }
    Ok(())
}

pub fn init(args: &InitArgs) -> Result<()> {
    let config = config_from(&args.model);
    let data = load_dataset(&args.data)?;
    let (train_set, _) = split(&args.data, &data, config.seed)?;
    let model = trainer::untrained(&config, &train_set)?;
    checkpoint::save(&model, &args.out)?;
    out!("checkpoint: {}", args.out.display());
    Ok(())
}
