//! Pauli strings with exact global-phase tracking.
//!
//! A string is stored as `i^k * X^x * Z^z` with `x`, `z` bit vectors over
//! the qubits and `k` a power of `i` mod 4. All products are computed with
//! the reordering rule `Z^b * X^a = (-1)^(b.a) X^a Z^b`, so signs are exact
//! rather than symbolic.

use alloc::string::String;
use core::fmt;

use crate::f2::F2Vector;

/// A phase-tracked Pauli operator `i^k X^x Z^z` on `n` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    x: F2Vector,
    z: F2Vector,
    /// Power of `i` in the global prefactor, reduced mod 4.
    i_power: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: F2Vector::zero(n),
            z: F2Vector::zero(n),
            i_power: 0,
        }
    }

    pub fn new(x: F2Vector, z: F2Vector, i_power: u8) -> Self {
        assert_eq!(x.len(), z.len(), "X and Z supports must cover the same qubits");
        PauliString { x, z, i_power: i_power % 4 }
    }

    /// The Hermitian representative `(-1)^negated * i^(x.z) X^x Z^z`.
    ///
    /// The `i^(x.z)` prefactor (with `x.z` the GF(2) inner product) makes
    /// the operator self-adjoint for every support pattern, so a sign bit
    /// is the only remaining freedom.
    pub fn hermitian(x: F2Vector, z: F2Vector, negated: bool) -> Self {
        let mut k = u8::from(x.dot(&z));
        if negated {
            k = (k + 2) % 4;
        }
        PauliString::new(x, z, k)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &F2Vector {
        &self.x
    }

    pub fn z(&self) -> &F2Vector {
        &self.z
    }

    pub fn i_power(&self) -> u8 {
        self.i_power
    }

    pub fn is_identity(&self) -> bool {
        self.i_power == 0 && self.x.is_zero() && self.z.is_zero()
    }

    /// Exact operator product `self * rhs` (self applied after rhs):
    /// commuting `Z^z1` past `X^x2` contributes `(-1)^(z1.x2)`.
    pub fn mul(&self, rhs: &PauliString) -> PauliString {
        assert_eq!(self.num_qubits(), rhs.num_qubits(), "qubit count mismatch");
        let mut x = self.x.clone();
        x.xor_assign(&rhs.x);
        let mut z = self.z.clone();
        z.xor_assign(&rhs.z);
        let swap = u8::from(self.z.dot(&rhs.x));
        PauliString::new(x, z, (self.i_power + rhs.i_power + 2 * swap) % 4)
    }

    /// Whether the two operators commute (parity of the symplectic
    /// pairing of their supports is even).
    pub fn commutes_with(&self, rhs: &PauliString) -> bool {
        !(self.x.dot(&rhs.z) ^ self.z.dot(&rhs.x))
    }

    /// For a Hermitian string, its sign relative to the canonical
    /// representative: `self = (-1)^sign * i^(x.z) X^x Z^z`. Returns `None`
    /// for anti-Hermitian strings.
    pub fn hermitian_sign(&self) -> Option<bool> {
        let canonical = u8::from(self.x.dot(&self.z));
        match (4 + self.i_power - canonical) % 4 {
            0 => Some(false),
            2 => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for PauliString {
    /// Renders as a phase prefix followed by one letter per qubit, e.g.
    /// `+XIZ` or `-iYY`. The letter `Y` denotes the Hermitian Pauli `Y`,
    /// so the prefix absorbs the `i` from each `Y = i X Z` site.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut letters = String::new();
        let mut y_sites = 0u8;
        for q in 0..self.num_qubits() {
            letters.push(match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => {
                    y_sites = (y_sites + 1) % 4;
                    'Y'
                }
            });
        }
        let prefix = match (4 + self.i_power - y_sites) % 4 {
            0 => "+",
            1 => "+i",
            2 => "-",
            3 => "-i",
            _ => unreachable!(),
        };
        write!(f, "{prefix}{letters}")
    }
}
