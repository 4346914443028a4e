use std::fmt;
use std::str::FromStr;

use super::gate::GateOp;
use crate::error::{Error, Result};

/// Ordered gate list over a fixed number of qubits.
///
/// The text form is one op per line (`KIND angle[,angle] q[,q,q]`), preceded
/// by a `# qubits N` header line. Lines starting with `#` are otherwise
/// ignored when parsing; without a header the width is inferred from the
/// largest qubit index.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitSpec {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl CircuitSpec {
    pub fn new(n_qubits: usize) -> Self {
        CircuitSpec {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        if let Some(&q) = op.qubits().iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::Index(format!(
                "{} on qubit {q} exceeds circuit width {}",
                op.kind(),
                self.n_qubits
            )));
        }
        self.ops.push(op);
        Ok(())
    }

    /// Appends all ops of `other`, which must fit within this circuit's width.
    pub fn append(&mut self, other: &CircuitSpec) -> Result<()> {
        for op in other.ops() {
            self.push(*op)?;
        }
        Ok(())
    }

    /// Smallest and largest qubit index touched by any op.
    pub fn qubit_span(&self) -> Option<(usize, usize)> {
        self.ops
            .iter()
            .flat_map(|op| op.qubits().iter().copied())
            .fold(None, |acc, q| match acc {
                None => Some((q, q)),
                Some((lo, hi)) => Some((lo.min(q), hi.max(q))),
            })
    }

    /// Copy with every qubit moved by `offset` into a circuit of `n_qubits`.
    pub fn relocated(&self, offset: isize, n_qubits: usize) -> Result<Self> {
        let mut out = CircuitSpec::new(n_qubits);
        for op in &self.ops {
            out.push(op.shifted(offset)?)?;
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CircuitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# qubits {}", self.n_qubits)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

impl FromStr for CircuitSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut ops = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let mut words = comment.split_whitespace();
                if words.next() == Some("qubits") {
                    let n =
                        words
                            .next()
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| Error::Parse {
                                line: lineno + 1,
                                msg: "malformed `# qubits` header".into(),
                            })?;
                    declared = Some(n);
                }
                continue;
            }
            let op: GateOp = line.parse().map_err(|e: Error| Error::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            ops.push(op);
        }
        let inferred = ops
            .iter()
            .flat_map(|op| op.qubits().iter().copied())
            .max()
            .map_or(0, |q| q + 1);
        let mut circuit = CircuitSpec::new(declared.unwrap_or(inferred));
        for op in ops {
            circuit.push(op)?;
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_checks_width() {
        let mut c = CircuitSpec::new(2);
        c.push(GateOp::cry(0.1, 0, 1)).unwrap();
        assert!(matches!(c.push(GateOp::h(2)), Err(Error::Index(_))));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut c = CircuitSpec::new(5);
        c.push(GateOp::h(0)).unwrap();
        c.push(GateOp::ry(1.2345678901234, 1)).unwrap();
        c.push(GateOp::rz(-0.5, 2)).unwrap();
        c.push(GateOp::cswap(0, 1, 3)).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("# qubits 5\nH 0\nRY 1.23456789012e0 1\n"));
        let back: CircuitSpec = text.parse().unwrap();
        assert_eq!(back.n_qubits(), 5);
        assert_eq!(back.len(), 4);
        assert_eq!(back.ops()[3], GateOp::cswap(0, 1, 3));
        assert!((back.ops()[1].params()[0] - 1.2345678901234).abs() < 1e-11);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = "# qubits 2\nH 0\nRY x 1\n"
            .parse::<CircuitSpec>()
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn width_inferred_without_header() {
        let c: CircuitSpec = "H 0\nCRY 1e0 0,3\n".parse().unwrap();
        assert_eq!(c.n_qubits(), 4);
        assert_eq!(c.qubit_span(), Some((0, 3)));
    }
}
