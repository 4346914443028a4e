use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Gate families understood by the simulator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    H,
    RX,
    RY,
    RZ,
    /// General single-qubit rotation `R(theta, phi)`.
    R,
    RXX,
    RYY,
    RZZ,
    CRY,
    CRZ,
    CSWAP,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::H,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::R,
        GateKind::RXX,
        GateKind::RYY,
        GateKind::RZZ,
        GateKind::CRY,
        GateKind::CRZ,
        GateKind::CSWAP,
    ];

    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::R => 1,
            GateKind::RXX | GateKind::RYY | GateKind::RZZ | GateKind::CRY | GateKind::CRZ => 2,
            GateKind::CSWAP => 3,
        }
    }

    /// Number of angle parameters.
    pub fn n_params(self) -> usize {
        match self {
            GateKind::H | GateKind::CSWAP => 0,
            GateKind::R => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::R => "R",
            GateKind::RXX => "RXX",
            GateKind::RYY => "RYY",
            GateKind::RZZ => "RZZ",
            GateKind::CRY => "CRY",
            GateKind::CRZ => "CRZ",
            GateKind::CSWAP => "CSWAP",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown gate kind `{s}`")))
    }
}

/// One gate application: kind, angles and the qubits it touches.
///
/// Controlled gates list the control first. `CSWAP` is `(control, a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateOp {
    kind: GateKind,
    params: [f64; 2],
    qubits: [usize; 3],
}

impl GateOp {
    pub fn new(kind: GateKind, params: &[f64], qubits: &[usize]) -> Result<Self> {
        if params.len() != kind.n_params() {
            return Err(Error::Parameter(format!(
                "{kind} takes {} angle(s), got {}",
                kind.n_params(),
                params.len()
            )));
        }
        if qubits.len() != kind.arity() {
            return Err(Error::Parameter(format!(
                "{kind} acts on {} qubit(s), got {}",
                kind.arity(),
                qubits.len()
            )));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::Index(format!("{kind} repeats qubit {q}")));
            }
        }
        let mut op = GateOp {
            kind,
            params: [0.0; 2],
            qubits: [0; 3],
        };
        op.params[..params.len()].copy_from_slice(params);
        op.qubits[..qubits.len()].copy_from_slice(qubits);
        Ok(op)
    }

    // Infallible constructors for the fixed-shape gates. Distinctness of the
    // qubit indices is still checked when the gate is applied.
    fn raw(kind: GateKind, params: [f64; 2], qubits: [usize; 3]) -> Self {
        GateOp {
            kind,
            params,
            qubits,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::raw(GateKind::H, [0.0; 2], [q, 0, 0])
    }

    pub fn rx(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::RX, [theta, 0.0], [q, 0, 0])
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::RY, [theta, 0.0], [q, 0, 0])
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self::raw(GateKind::RZ, [theta, 0.0], [q, 0, 0])
    }

    pub fn r(theta: f64, phi: f64, q: usize) -> Self {
        Self::raw(GateKind::R, [theta, phi], [q, 0, 0])
    }

    pub fn rxx(theta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::RXX, [theta, 0.0], [a, b, 0])
    }

    pub fn ryy(theta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::RYY, [theta, 0.0], [a, b, 0])
    }

    pub fn rzz(theta: f64, a: usize, b: usize) -> Self {
        Self::raw(GateKind::RZZ, [theta, 0.0], [a, b, 0])
    }

    pub fn cry(theta: f64, control: usize, target: usize) -> Self {
        Self::raw(GateKind::CRY, [theta, 0.0], [control, target, 0])
    }

    pub fn crz(theta: f64, control: usize, target: usize) -> Self {
        Self::raw(GateKind::CRZ, [theta, 0.0], [control, target, 0])
    }

    pub fn cswap(control: usize, a: usize, b: usize) -> Self {
        Self::raw(GateKind::CSWAP, [0.0; 2], [control, a, b])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params[..self.kind.n_params()]
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    /// Same gate with every qubit index moved by `offset`.
    pub fn shifted(&self, offset: isize) -> Result<Self> {
        let mut op = *self;
        for q in op.qubits[..self.kind.arity()].iter_mut() {
            *q = q
                .checked_add_signed(offset)
                .ok_or_else(|| Error::Index(format!("qubit {q} shifted by {offset}")))?;
        }
        Ok(op)
    }

    /// Dense unitary of the gate.
    ///
    /// Row/column index bit `k` corresponds to `self.qubits()[k]`, i.e. the
    /// first listed qubit is the least-significant bit.
    pub fn matrix(&self) -> GateMatrix {
        let t = self.params[0];
        let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
        let i = Complex64::i();
        let re = |x: f64| Complex64::new(x, 0.0);
        match self.kind {
            GateKind::H => {
                let h = re(FRAC_1_SQRT_2);
                GateMatrix::from_rows(2, &[h, h, h, -h])
            }
            GateKind::RX => GateMatrix::from_rows(2, &[re(c), -i * s, -i * s, re(c)]),
            GateKind::RY => GateMatrix::from_rows(2, &[re(c), re(-s), re(s), re(c)]),
            GateKind::RZ => GateMatrix::from_rows(
                2,
                &[
                    Complex64::cis(-t / 2.0),
                    ZERO,
                    ZERO,
                    Complex64::cis(t / 2.0),
                ],
            ),
            GateKind::R => {
                let phi = self.params[1];
                GateMatrix::from_rows(
                    2,
                    &[
                        re(c),
                        -i * Complex64::cis(-phi) * s,
                        -i * Complex64::cis(phi) * s,
                        re(c),
                    ],
                )
            }
            GateKind::RXX => {
                let (d, o) = (re(c), -i * s);
                GateMatrix::from_rows(
                    4,
                    &[
                        d, ZERO, ZERO, o, ZERO, d, o, ZERO, ZERO, o, d, ZERO, o, ZERO, ZERO, d,
                    ],
                )
            }
            GateKind::RYY => {
                let (d, p, m) = (re(c), i * s, -i * s);
                GateMatrix::from_rows(
                    4,
                    &[
                        d, ZERO, ZERO, p, ZERO, d, m, ZERO, ZERO, m, d, ZERO, p, ZERO, ZERO, d,
                    ],
                )
            }
            GateKind::RZZ => {
                // exp(-i t/2 Z⊗Z): even-parity states pick up e^{-it/2}.
                let (a, b) = (Complex64::cis(-t / 2.0), Complex64::cis(t / 2.0));
                GateMatrix::diagonal(&[a, b, b, a])
            }
            GateKind::CRY | GateKind::CRZ => {
                let inner = if self.kind == GateKind::CRY {
                    GateOp::ry(t, 0).matrix()
                } else {
                    GateOp::rz(t, 0).matrix()
                };
                // control is local bit 0, target local bit 1
                let mut m = GateMatrix::identity(4);
                for (r, row) in [1usize, 3].into_iter().enumerate() {
                    for (cc, col) in [1usize, 3].into_iter().enumerate() {
                        m.set(row, col, inner.get(r, cc));
                    }
                }
                m
            }
            GateKind::CSWAP => {
                let mut m = GateMatrix::identity(8);
                m.set(3, 3, ZERO);
                m.set(5, 5, ZERO);
                m.set(3, 5, ONE);
                m.set(5, 3, ONE);
                m
            }
        }
    }
}

impl fmt::Display for GateOp {
    /// `KIND angle[,angle] q[,q,q]`, angles with 12 significant digits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params().is_empty() {
            let angles: Vec<String> = self.params().iter().map(|a| format!("{a:.11e}")).collect();
            write!(f, " {}", angles.join(","))?;
        }
        let qubits: Vec<String> = self.qubits().iter().map(|q| q.to_string()).collect();
        write!(f, " {}", qubits.join(","))
    }
}

impl FromStr for GateOp {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: String| Error::Parameter(format!("`{line}`: {msg}"));
        let kind: GateKind = fields
            .first()
            .ok_or_else(|| bad("empty line".into()))?
            .parse()?;
        let (angle_field, qubit_field) = match (kind.n_params(), fields.len()) {
            (0, 2) => (None, fields[1]),
            (n, 3) if n > 0 => (Some(fields[1]), fields[2]),
            _ => return Err(bad("wrong number of fields".into())),
        };
        let params = match angle_field {
            Some(a) => a
                .split(',')
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| bad(format!("angle `{s}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        };
        let qubits = qubit_field
            .split(',')
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|e| bad(format!("qubit `{s}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GateOp::new(kind, &params, &qubits)
    }
}

/// Row-major dense complex matrix of size `dim × dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl GateMatrix {
    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Self {
        assert_eq!(entries.len(), dim * dim);
        GateMatrix {
            dim,
            data: entries.to_vec(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![ZERO; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = ONE;
        }
        GateMatrix { dim, data }
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = GateMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        };
        for (k, d) in diag.iter().enumerate() {
            m.data[k * dim + k] = *d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &GateMatrix) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.get(r, k);
                for c in 0..n {
                    out[r * n + c] += a * rhs.get(k, c);
                }
            }
        }
        GateMatrix { dim: n, data: out }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &GateMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
