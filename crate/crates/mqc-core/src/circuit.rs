//! Gate-level circuit IR and its plain-text serialization.
//!
//! A circuit is a qubit count plus a temporally ordered gate list (index 0
//! acts first). Besides the standard Clifford generators it includes the
//! two programmable multiqubit gates (`MQX`, `MQZ`, each parameterized by
//! a symmetric coupling matrix) and a Pauli correction layer.
//!
//! Text format: optional `#` comments, a `qubits <n>` header, then one
//! gate per line. Keywords are case-insensitive on input and uppercase on
//! output; coupling matrices are written as `;`-joined 0/1 rows.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::f2::{F2Matrix, F2Vector};
use crate::symplectic::{
    gen_cnot, gen_cz, gen_h, gen_mq, gen_pauli_layer, gen_s, gen_sdg, gen_x, gen_y, gen_z,
    MqBasis, SymplecticOp,
};

/// Error from parsing the circuit text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for ParseError {}

/// One gate in the IR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    /// Programmable multiqubit gate conjugating in the X basis.
    MqX(F2Matrix),
    /// Programmable multiqubit gate conjugating in the Z basis.
    MqZ(F2Matrix),
    /// Pauli correction layer `exp(i pi/2 sum mu_k Z_k) exp(i pi/2 sum
    /// eta_k X_k)`.
    PauliLayer { mu: F2Vector, eta: F2Vector },
}

impl Gate {
    /// Whether this is one of the programmable multiqubit gates (the
    /// resource the synthesis pipeline minimizes).
    pub fn is_multiqubit(&self) -> bool {
        matches!(self, Gate::MqX(_) | Gate::MqZ(_))
    }

    /// The tableau of this gate on an `n`-qubit register.
    pub fn to_symplectic(&self, n: usize) -> SymplecticOp {
        match self {
            Gate::H(q) => gen_h(n, *q),
            Gate::S(q) => gen_s(n, *q),
            Gate::Sdg(q) => gen_sdg(n, *q),
            Gate::X(q) => gen_x(n, *q),
            Gate::Y(q) => gen_y(n, *q),
            Gate::Z(q) => gen_z(n, *q),
            Gate::Cnot { control, target } => gen_cnot(n, *control, *target),
            Gate::Cz(a, b) => gen_cz(n, *a, *b),
            Gate::MqX(xi) => {
                assert_eq!(xi.rows(), n, "coupling matrix size mismatch");
                gen_mq(MqBasis::X, xi)
            }
            Gate::MqZ(xi) => {
                assert_eq!(xi.rows(), n, "coupling matrix size mismatch");
                gen_mq(MqBasis::Z, xi)
            }
            Gate::PauliLayer { mu, eta } => {
                assert_eq!(mu.len(), n, "layer size mismatch");
                gen_pauli_layer(mu, eta)
            }
        }
    }

    fn write_text(&self, out: &mut String) {
        use core::fmt::Write;
        let rows = |m: &F2Matrix| {
            (0..m.rows())
                .map(|i| m.row(i).to_string01())
                .collect::<Vec<_>>()
                .join(";")
        };
        match self {
            Gate::H(q) => write!(out, "H {q}").unwrap(),
            Gate::S(q) => write!(out, "S {q}").unwrap(),
            Gate::Sdg(q) => write!(out, "SDG {q}").unwrap(),
            Gate::X(q) => write!(out, "X {q}").unwrap(),
            Gate::Y(q) => write!(out, "Y {q}").unwrap(),
            Gate::Z(q) => write!(out, "Z {q}").unwrap(),
            Gate::Cnot { control, target } => write!(out, "CNOT {control} {target}").unwrap(),
            Gate::Cz(a, b) => write!(out, "CZ {a} {b}").unwrap(),
            Gate::MqX(xi) => write!(out, "MQX {}", rows(xi)).unwrap(),
            Gate::MqZ(xi) => write!(out, "MQZ {}", rows(xi)).unwrap(),
            Gate::PauliLayer { mu, eta } => {
                write!(out, "PAULI {} {}", mu.to_string01(), eta.to_string01()).unwrap()
            }
        }
    }

    /// Validates qubit indices and parameter shapes against a register of
    /// `n` qubits, returning a description of the first problem found.
    fn check(&self, n: usize) -> Result<(), String> {
        let idx = |q: usize| -> Result<(), String> {
            if q < n {
                Ok(())
            } else {
                Err(alloc::format!("qubit index {q} out of range for {n} qubits"))
            }
        };
        match self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => idx(*q),
            Gate::Cnot { control, target } => {
                idx(*control)?;
                idx(*target)?;
                if control == target {
                    return Err(String::from("control and target must differ"));
                }
                Ok(())
            }
            Gate::Cz(a, b) => {
                idx(*a)?;
                idx(*b)?;
                if a == b {
                    return Err(String::from("CZ qubits must differ"));
                }
                Ok(())
            }
            Gate::MqX(xi) | Gate::MqZ(xi) => {
                if xi.rows() != n || xi.cols() != n {
                    return Err(alloc::format!(
                        "coupling matrix is {}x{}, expected {n}x{n}",
                        xi.rows(),
                        xi.cols()
                    ));
                }
                if !xi.is_symmetric() {
                    return Err(String::from("coupling matrix must be symmetric"));
                }
                Ok(())
            }
            Gate::PauliLayer { mu, eta } => {
                if mu.len() != n || eta.len() != n {
                    return Err(alloc::format!(
                        "layer vectors have lengths {} and {}, expected {n}",
                        mu.len(),
                        eta.len()
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A temporally ordered gate list on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "circuits need at least one qubit");
        Circuit { n, gates: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate; panics if it does not fit the register.
    pub fn push(&mut self, gate: Gate) {
        if let Err(msg) = gate.check(self.n) {
            panic!("invalid gate: {msg}");
        }
        self.gates.push(gate);
    }

    /// Number of programmable multiqubit gates in the list.
    pub fn mq_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_multiqubit()).count()
    }

    /// Folds the gate list into a single tableau; index 0 acts first, so
    /// each new gate composes on the left.
    pub fn to_symplectic(&self) -> SymplecticOp {
        let mut acc = SymplecticOp::identity(self.n);
        for g in &self.gates {
            acc = g.to_symplectic(self.n).compose(&acc);
        }
        acc
    }

    /// A random circuit over the generating set `{H, S, CNOT, CZ}`.
    pub fn random<R: Rng + ?Sized>(n: usize, length: usize, rng: &mut R) -> Circuit {
        let mut c = Circuit::new(n);
        for _ in 0..length {
            let q = rng.gen_range(0..n);
            let gate = match rng.gen_range(0..4) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                2 if n > 1 => {
                    let t = (q + rng.gen_range(1..n)) % n;
                    Gate::Cnot { control: q, target: t }
                }
                _ if n > 1 => {
                    let t = (q + rng.gen_range(1..n)) % n;
                    Gate::Cz(q, t)
                }
                _ => Gate::S(q),
            };
            c.push(gate);
        }
        c
    }

    /// A random circuit containing only CNOT gates.
    pub fn random_cnot<R: Rng + ?Sized>(n: usize, length: usize, rng: &mut R) -> Circuit {
        assert!(n >= 2, "CNOT circuits need at least two qubits");
        let mut c = Circuit::new(n);
        for _ in 0..length {
            let control = rng.gen_range(0..n);
            let target = (control + rng.gen_range(1..n)) % n;
            c.push(Gate::Cnot { control, target });
        }
        c
    }

    /// Serializes to the circuit text format.
    pub fn to_text(&self) -> String {
        let mut out = alloc::format!("qubits {}\n", self.n);
        for g in &self.gates {
            g.write_text(&mut out);
            out.push('\n');
        }
        out
    }

    /// Parses the circuit text format. Comments start with `#` and run to
    /// the end of the line; blank lines are ignored; keywords are
    /// case-insensitive.
    pub fn from_text(text: &str) -> Result<Circuit, ParseError> {
        let err = |line: usize, message: &str| ParseError {
            line,
            message: message.to_string(),
        };
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let mut tokens = content.split_whitespace();
            let Some(keyword) = tokens.next() else {
                continue;
            };
            let keyword = keyword.to_ascii_uppercase();
            let rest: Vec<&str> = tokens.collect();

            let parse_index = |tok: &str| -> Result<usize, ParseError> {
                tok.parse::<usize>()
                    .map_err(|_| err(line_no, &alloc::format!("expected qubit index, got {tok:?}")))
            };
            let one_index = |rest: &[&str]| -> Result<usize, ParseError> {
                if rest.len() != 1 {
                    return Err(err(line_no, "expected exactly one qubit index"));
                }
                parse_index(rest[0])
            };
            let two_indices = |rest: &[&str]| -> Result<(usize, usize), ParseError> {
                if rest.len() != 2 {
                    return Err(err(line_no, "expected exactly two qubit indices"));
                }
                Ok((parse_index(rest[0])?, parse_index(rest[1])?))
            };

            if keyword == "QUBITS" {
                if circuit.is_some() {
                    return Err(err(line_no, "duplicate qubits header"));
                }
                if rest.len() != 1 {
                    return Err(err(line_no, "expected `qubits <n>`"));
                }
                let n: usize = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, "qubit count must be a positive integer"))?;
                if n == 0 {
                    return Err(err(line_no, "qubit count must be at least 1"));
                }
                circuit = Some(Circuit::new(n));
                continue;
            }

            let Some(c) = circuit.as_mut() else {
                return Err(err(line_no, "missing `qubits <n>` header before gates"));
            };

            let gate = match keyword.as_str() {
                "H" => Gate::H(one_index(&rest)?),
                "S" => Gate::S(one_index(&rest)?),
                "SDG" => Gate::Sdg(one_index(&rest)?),
                "X" => Gate::X(one_index(&rest)?),
                "Y" => Gate::Y(one_index(&rest)?),
                "Z" => Gate::Z(one_index(&rest)?),
                "CNOT" => {
                    let (a, b) = two_indices(&rest)?;
                    Gate::Cnot { control: a, target: b }
                }
                "CZ" => {
                    let (a, b) = two_indices(&rest)?;
                    Gate::Cz(a, b)
                }
                "MQX" | "MQZ" => {
                    if rest.len() != 1 {
                        return Err(err(line_no, "expected `;`-joined matrix rows"));
                    }
                    let xi = F2Matrix::from_rows_str(rest[0])
                        .map_err(|m| err(line_no, &m))?;
                    if keyword == "MQX" {
                        Gate::MqX(xi)
                    } else {
                        Gate::MqZ(xi)
                    }
                }
                "PAULI" => {
                    if rest.len() != 2 {
                        return Err(err(line_no, "expected `PAULI <mu> <eta>`"));
                    }
                    let mu = F2Vector::from_str01(rest[0]).map_err(|m| err(line_no, &m))?;
                    let eta = F2Vector::from_str01(rest[1]).map_err(|m| err(line_no, &m))?;
                    Gate::PauliLayer { mu, eta }
                }
                other => return Err(err(line_no, &alloc::format!("unknown gate keyword {other:?}"))),
            };
            if let Err(msg) = gate.check(c.n) {
                return Err(err(line_no, &msg));
            }
            c.gates.push(gate);
        }
        circuit.ok_or(err(text.lines().count().max(1), "missing `qubits <n>` header"))
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
