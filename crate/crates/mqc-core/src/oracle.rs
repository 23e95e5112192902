//! Independent dense-unitary reference implementation.
//!
//! Everything here works directly with `2^n x 2^n` complex matrices and
//! never consults the tableau tables in [`crate::symplectic`], so
//! agreement between the two paths is a real check rather than a
//! tautology. Basis states are indexed little-endian: qubit `k` is bit
//! `k` of the state index.
//!
//! The dense representation is capped at 10 qubits; the cross-validation
//! tests and the exactness checks in the acceptance suite stay well below
//! that.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::f2::{F2Matrix, F2Vector};
use crate::pauli::PauliString;
use crate::symfactor::ProductOrder;
use crate::symplectic::{NotSymplectic, SymplecticOp};

/// Hard cap on dense-matrix verification: `2^10 x 2^10` complex entries
/// is the largest size that stays desk-scale.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Error from [`extract_pauli`] / [`dense_tableau`] when a dense operator
/// is not (proportional to) a Pauli string with an `i^k` prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotPauliOperator;

impl fmt::Display for NotPauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dense operator is not a phase-tracked Pauli string")
    }
}

impl core::error::Error for NotPauliOperator {}

fn i_power(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// A dense unitary on `n` qubits, stored row-major.
#[derive(Debug, Clone)]
pub struct DenseUnitary {
    n: usize,
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_DENSE_QUBITS, "dense oracle capped at {MAX_DENSE_QUBITS} qubits");
        let dim = 1usize << n;
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            entries[r * dim + r] = Complex64::new(1.0, 0.0);
        }
        DenseUnitary { n, dim, entries }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    /// The unitary of a whole circuit, built by applying each gate's
    /// dense action in temporal order.
    pub fn from_circuit(circuit: &Circuit) -> Self {
        let mut u = DenseUnitary::identity(circuit.num_qubits());
        for g in circuit.gates() {
            u.apply_gate(g);
        }
        u
    }

    /// Dense form of a phase-tracked Pauli: `i^k X^x Z^z` maps `|v>` to
    /// `i^k (-1)^(z.v) |v + x>`.
    pub fn from_pauli(p: &PauliString) -> Self {
        let n = p.num_qubits();
        assert!(n <= MAX_DENSE_QUBITS, "dense oracle capped at {MAX_DENSE_QUBITS} qubits");
        let dim = 1usize << n;
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        let x_mask = bits_to_mask(p.x());
        let z_mask = bits_to_mask(p.z());
        let phase = i_power(p.i_power());
        for v in 0..dim {
            let sign = if ((v & z_mask).count_ones() & 1) == 1 { -1.0 } else { 1.0 };
            entries[(v ^ x_mask) * dim + v] = phase * sign;
        }
        DenseUnitary { n, dim, entries }
    }

    /// Left-multiplies this matrix by the dense action of one gate.
    pub fn apply_gate(&mut self, gate: &Gate) {
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        let h = [
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(-inv_sqrt2, 0.0),
        ];
        match gate {
            Gate::H(q) => self.apply_1q(*q, &h),
            Gate::S(q) => self.apply_1q(
                *q,
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 1.0),
                ],
            ),
            Gate::Sdg(q) => self.apply_1q(
                *q,
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, -1.0),
                ],
            ),
            Gate::X(q) => self.apply_1q(
                *q,
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            ),
            Gate::Y(q) => self.apply_1q(
                *q,
                &[
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, -1.0),
                    Complex64::new(0.0, 1.0),
                    Complex64::new(0.0, 0.0),
                ],
            ),
            Gate::Z(q) => self.apply_1q(
                *q,
                &[
                    Complex64::new(1.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(-1.0, 0.0),
                ],
            ),
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for v in 0..self.dim {
                    if v & c != 0 && v & t == 0 {
                        self.swap_rows(v, v | t);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for v in 0..self.dim {
                    if v & mask == mask {
                        self.scale_row(v, Complex64::new(-1.0, 0.0));
                    }
                }
            }
            Gate::MqZ(xi) => self.apply_mqz(xi),
            Gate::MqX(xi) => {
                for q in 0..self.n {
                    self.apply_1q(q, &h);
                }
                self.apply_mqz(xi);
                for q in 0..self.n {
                    self.apply_1q(q, &h);
                }
            }
            Gate::PauliLayer { mu, eta } => {
                // i^(|mu|+|eta|) Z^mu X^eta: XOR-permute rows by eta, then
                // phase row v by (-1)^(mu.v).
                let eta_mask = bits_to_mask(eta);
                let mu_mask = bits_to_mask(mu);
                for v in 0..self.dim {
                    if v < (v ^ eta_mask) {
                        self.swap_rows(v, v ^ eta_mask);
                    }
                }
                let k = ((mu.weight() + eta.weight()) % 4) as u8;
                for v in 0..self.dim {
                    let mut phase = i_power(k);
                    if ((v & mu_mask).count_ones() & 1) == 1 {
                        phase = -phase;
                    }
                    self.scale_row(v, phase);
                }
            }
        }
    }

    /// Diagonal action of the Z-basis multiqubit gate: basis state `v`
    /// acquires `i^(sum_k xi_kk v_k) * (-1)^(sum_{k>j} xi_kj v_k v_j)`.
    fn apply_mqz(&mut self, xi: &F2Matrix) {
        assert_eq!(xi.rows(), self.n, "coupling matrix size mismatch");
        assert!(xi.is_symmetric(), "coupling matrix must be symmetric");
        let mut diag_mask = 0usize;
        let mut row_below = alloc::vec![0usize; self.n];
        for (k, below) in row_below.iter_mut().enumerate() {
            if xi.get(k, k) {
                diag_mask |= 1 << k;
            }
            for j in 0..k {
                if xi.get(k, j) {
                    *below |= 1 << j;
                }
            }
        }
        for v in 0..self.dim {
            let quarter = (v & diag_mask).count_ones();
            let mut pairs = 0u32;
            let mut bits = v;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                pairs += (v & row_below[k]).count_ones();
            }
            let k = ((quarter + 2 * (pairs & 1)) % 4) as u8;
            if k != 0 {
                self.scale_row(v, i_power(k));
            }
        }
    }

    fn apply_1q(&mut self, q: usize, m: &[Complex64; 4]) {
        let bit = 1usize << q;
        for r in 0..self.dim {
            if r & bit != 0 {
                continue;
            }
            let r1 = r | bit;
            for c in 0..self.dim {
                let u0 = self.entries[r * self.dim + c];
                let u1 = self.entries[r1 * self.dim + c];
                self.entries[r * self.dim + c] = m[0] * u0 + m[1] * u1;
                self.entries[r1 * self.dim + c] = m[2] * u0 + m[3] * u1;
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.dim {
            self.entries.swap(a * self.dim + c, b * self.dim + c);
        }
    }

    fn scale_row(&mut self, r: usize, phase: Complex64) {
        for c in 0..self.dim {
            self.entries[r * self.dim + c] *= phase;
        }
    }

    /// Naive matrix product; intended for the small registers the oracle
    /// is used on.
    pub fn mul(&self, rhs: &DenseUnitary) -> DenseUnitary {
        assert_eq!(self.n, rhs.n, "qubit count mismatch");
        let dim = self.dim;
        let mut out = DenseUnitary {
            n: self.n,
            dim,
            entries: alloc::vec![Complex64::new(0.0, 0.0); dim * dim],
        };
        for r in 0..dim {
            for k in 0..dim {
                let a = self.entries[r * dim + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    out.entries[r * dim + c] += a * rhs.entries[k * dim + c];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> DenseUnitary {
        let dim = self.dim;
        let mut out = self.clone();
        for r in 0..dim {
            for c in 0..dim {
                out.entries[r * dim + c] = self.entries[c * dim + r].conj();
            }
        }
        out
    }

    /// Whether `other` equals this unitary up to a global phase:
    /// `|tr(self^dag other)| / 2^n` must be within `tol` of 1.
    pub fn equal_up_to_global_phase(&self, other: &DenseUnitary, tol: f64) -> bool {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut tr = Complex64::new(0.0, 0.0);
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            tr += a.conj() * b;
        }
        let overlap = libm::sqrt(tr.norm_sqr()) / self.dim as f64;
        (overlap - 1.0).abs() <= tol
    }

    #[cfg(test)]
    fn scaled(&self, phase: Complex64) -> DenseUnitary {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e *= phase;
        }
        out
    }
}

fn bits_to_mask(v: &F2Vector) -> usize {
    let mut mask = 0usize;
    for i in v.iter_ones() {
        mask |= 1 << i;
    }
    mask
}

/// Recovers the phase-tracked Pauli string a dense operator represents,
/// or reports that it is not one. Column 0 fixes the X support and the
/// `i^k` prefactor; each column `e_j` then fixes one Z bit.
pub fn extract_pauli(u: &DenseUnitary) -> Result<PauliString, NotPauliOperator> {
    const TOL: f64 = 1e-6;
    let n = u.num_qubits();
    let read_column = |c: usize, expect_row: Option<usize>| -> Result<(usize, Complex64), NotPauliOperator> {
        let mut found: Option<(usize, Complex64)> = None;
        for r in 0..u.dim() {
            let e = u.entry(r, c);
            if libm::sqrt(e.norm_sqr()) > TOL {
                if found.is_some() {
                    return Err(NotPauliOperator);
                }
                found = Some((r, e));
            }
        }
        let (r, e) = found.ok_or(NotPauliOperator)?;
        if (libm::sqrt(e.norm_sqr()) - 1.0).abs() > TOL {
            return Err(NotPauliOperator);
        }
        if let Some(want) = expect_row {
            if r != want {
                return Err(NotPauliOperator);
            }
        }
        Ok((r, e))
    };

    let (x_mask, lead) = read_column(0, None)?;
    // Match the leading entry against i^k.
    let mut k = None;
    for cand in 0..4u8 {
        let d = lead - i_power(cand);
        if libm::sqrt(d.norm_sqr()) <= TOL {
            k = Some(cand);
        }
    }
    let k = k.ok_or(NotPauliOperator)?;

    let mut x = F2Vector::zero(n);
    for q in 0..n {
        if x_mask & (1 << q) != 0 {
            x.set(q, true);
        }
    }
    let mut z = F2Vector::zero(n);
    for q in 0..n {
        let c = 1usize << q;
        let (_, e) = read_column(c, Some(x_mask ^ c))?;
        let ratio = e / i_power(k);
        if libm::sqrt((ratio - Complex64::new(1.0, 0.0)).norm_sqr()) <= TOL {
            // z_q = 0
        } else if libm::sqrt((ratio + Complex64::new(1.0, 0.0)).norm_sqr()) <= TOL {
            z.set(q, true);
        } else {
            return Err(NotPauliOperator);
        }
    }
    Ok(PauliString::new(x, z, k))
}

/// Derives the tableau of a dense Clifford unitary by conjugating every
/// `X_j` and `Z_j` generator and reading off the resulting Pauli strings.
/// This is the oracle's own route to a [`SymplecticOp`]; it shares no
/// code with the generator tables.
pub fn dense_tableau(u: &DenseUnitary) -> Result<SymplecticOp, NotSymplectic> {
    let n = u.num_qubits();
    let udag = u.dagger();
    let mut s = F2Matrix::zero(2 * n, 2 * n);
    let mut r = F2Vector::zero(2 * n);
    for j in 0..2 * n {
        let mut x = F2Vector::zero(n);
        let mut z = F2Vector::zero(n);
        if j < n {
            x.set(j, true);
        } else {
            z.set(j - n, true);
        }
        let g = DenseUnitary::from_pauli(&PauliString::hermitian(x, z, false));
        let image = u.mul(&g).mul(&udag);
        let p = extract_pauli(&image).map_err(|_| NotSymplectic)?;
        let sign = p.hermitian_sign().ok_or(NotSymplectic)?;
        let col = p.x().concat(p.z());
        s.set_column(j, &col);
        r.set(j, sign);
    }
    SymplecticOp::from_parts(s, r)
}

/// Exhaustively enumerates factorizations of an invertible `B` into two
/// symmetric invertible matrices under the given product order. Only
/// feasible for very small `n` (the search space is `2^(n(n+1)/2)`).
pub fn brute_force_pairs(b: &F2Matrix, order: ProductOrder) -> Vec<(F2Matrix, F2Matrix)> {
    assert!(b.is_square(), "factorization target must be square");
    let n = b.rows();
    assert!(n <= 4, "brute force capped at 4x4");
    let free = n * (n + 1) / 2;
    let mut out = Vec::new();
    for bits in 0..(1u32 << free) {
        let mut s1 = F2Matrix::zero(n, n);
        let mut t = 0;
        for i in 0..n {
            for j in 0..=i {
                if bits >> t & 1 == 1 {
                    s1.set(i, j, true);
                    s1.set(j, i, true);
                }
                t += 1;
            }
        }
        let Ok(inv) = s1.invert() else {
            continue;
        };
        let s2 = match order {
            ProductOrder::S1S2 => inv.mul(b),
            ProductOrder::S2S1 => b.mul(&inv),
        };
        if s2.is_symmetric() {
            out.push((s1, s2));
        }
    }
    out
}
