use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::dataset::{Dataset, Sample};
use crate::error::{Error, Result};

const FEATURES: usize = 4;

/// Loads an Iris-style CSV: four numeric columns followed by a class column.
///
/// A non-numeric first row is taken as a header. Labels may be names or
/// integers; integer labels are ordered numerically, names by first
/// appearance.
pub fn load_iris(path: impl AsRef<Path>) -> Result<Dataset> {
    parse_iris(File::open(path)?)
}

pub fn parse_iris<R: Read>(reader: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);

    let mut rows: Vec<(usize, Vec<f64>, String)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if rows.is_empty() && i == 0 && record.get(0).is_some_and(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        if record.len() != FEATURES + 1 {
            return Err(Error::Dimension(format!(
                "line {line}: expected {FEATURES} feature columns and a label, found {} columns",
                record.len()
            )));
        }
        let features = record
            .iter()
            .take(FEATURES)
            .map(|f| {
                f.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: format!("`{f}` is not a number"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = record[FEATURES].to_string();
        if label.is_empty() {
            return Err(Error::Parse {
                line,
                msg: "missing class label".into(),
            });
        }
        rows.push((line, features, label));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "no data rows".into(),
        });
    }

    let mut names: Vec<String> = Vec::new();
    for (_, _, label) in &rows {
        if !names.contains(label) {
            names.push(label.clone());
        }
    }
    if names.iter().all(|n| n.parse::<u64>().is_ok()) {
        names.sort_by_key(|n| n.parse::<u64>().unwrap_or(u64::MAX));
    }
    let samples = rows
        .into_iter()
        .map(|(_, features, label)| Sample {
            features,
            label: names.iter().position(|n| *n == label).unwrap_or_default(),
        })
        .collect();
    Dataset::new(samples, FEATURES, names)
}
