//! Constant-cost synthesis: rewriting an arbitrary Clifford into a short,
//! fixed-length sequence of programmable multiqubit gates.
//!
//! The pipeline has three stages.
//!
//! 1. **Canonical form.** Every tableau factors (at the matrix level) as
//!    `MQX(xi_x) -> CNOT-layer(M) -> MQZ(xi_z) -> H(h)` in temporal order,
//!    where `h` is a set of qubits chosen so the relevant block becomes
//!    invertible, `xi_x = M^-1 B'` and `xi_z = C' M^-1` are automatically
//!    symmetric, and `M` is the invertible state matrix of a pure CNOT
//!    layer.
//! 2. **Five-gate CNOT layer.** The CNOT layer's Z-block `B = M^-T`
//!    factors as `B = S2 S1` with both factors symmetric invertible, which
//!    turns the whole layer into five alternating multiqubit gates.
//! 3. **Merging and lowering.** The five-gate tail merges with `MQZ(xi_z)`
//!    (coupling matrices simply add), zero couplings vanish, and diagonal
//!    couplings lower to single-qubit gates. A final Pauli layer repairs
//!    all signs exactly, so the compiled circuit implements the target
//!    tableau on the nose, not merely up to Pauli corrections.
//!
//! The result: at most 6 multiqubit gates for any Clifford, at most 5
//! for circuits of CNOTs alone, and at most 3 when the factored block is
//! already symmetric.

use alloc::vec::Vec;
use core::fmt;

use crate::circuit::{Circuit, Gate};
use crate::f2::{F2Matrix, F2Vector};
use crate::symfactor::{factor_symmetric_pair, FactorizationError, SymmetricPair};
use crate::symplectic::{MqBasis, SymplecticOp};

/// Error from the synthesis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisError {
    /// The symmetric-pair search failed (see
    /// [`FactorizationError::SearchExhausted`]).
    Factorization(FactorizationError),
}

impl fmt::Display for SynthesisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthesisError::Factorization(e) => write!(f, "factorization failed: {e}"),
        }
    }
}

impl core::error::Error for SynthesisError {}

impl From<FactorizationError> for SynthesisError {
    fn from(e: FactorizationError) -> Self {
        SynthesisError::Factorization(e)
    }
}

// ---------------------------------------------------------------------------
// Stage 1: canonical form.
// ---------------------------------------------------------------------------

/// Matrix-level canonical decomposition of a tableau: in temporal order,
/// `MQX(xi_x)`, a CNOT layer with state matrix `cx_matrix`, `MQZ(xi_z)`,
/// and a final layer of Hadamards on `h_subset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub xi_x: F2Matrix,
    pub cx_matrix: F2Matrix,
    pub xi_z: F2Matrix,
    pub h_subset: F2Vector,
}

/// Chooses the Hadamard subset: qubits outside a lexicographically-first
/// independent set of the X-block's rows. Swapping those rows with their
/// Z-block partners always yields an invertible X-block (the columns of
/// `[A; C]` span a Lagrangian subspace, so any dependency among chosen
/// rows would contradict the rank profile).
fn hadamard_subset(op: &SymplecticOp) -> F2Vector {
    let n = op.num_qubits();
    let a = op.matrix().block(0, 0, n, n);
    let profile = a.row_rank_profile();
    let mut h = F2Vector::zero(n);
    let mut next = 0usize;
    for k in 0..n {
        if next < profile.len() && profile[next] == k {
            next += 1;
        } else {
            h.set(k, true);
        }
    }
    h
}

/// Computes the canonical form of a tableau. Infallible: the Hadamard
/// subset construction guarantees the block inversion succeeds, and the
/// two coupling matrices are symmetric as a consequence of the symplectic
/// constraints.
pub fn canonical_form(op: &SymplecticOp) -> CanonicalForm {
    let n = op.num_qubits();
    let h = hadamard_subset(op);
    // Left-multiply by H(h): swap row k with row n+k for k in h.
    let mut rest = op.matrix().clone();
    for k in h.iter_ones() {
        for j in 0..2 * n {
            let hi = rest.get(k, j);
            let lo = rest.get(n + k, j);
            rest.set(k, j, lo);
            rest.set(n + k, j, hi);
        }
    }
    let a = rest.block(0, 0, n, n);
    let b = rest.block(0, n, n, n);
    let c = rest.block(n, 0, n, n);
    let a_inv = a
        .invert()
        .expect("Hadamard subset must make the X block invertible");
    let xi_x = a_inv.mul(&b);
    let xi_z = c.mul(&a_inv);
    debug_assert!(xi_x.is_symmetric(), "X coupling must be symmetric");
    debug_assert!(xi_z.is_symmetric(), "Z coupling must be symmetric");
    CanonicalForm {
        xi_x,
        cx_matrix: a,
        xi_z,
        h_subset: h,
    }
}

impl CanonicalForm {
    /// Emits the canonical form as a circuit with an explicit CNOT layer
    /// (at most two multiqubit gates; the CNOT layer is kept as CNOTs).
    /// Signs are *not* repaired here; see [`canonical_circuit`].
    pub fn to_circuit(&self) -> Circuit {
        let n = self.cx_matrix.rows();
        let mut c = Circuit::new(n);
        if !self.xi_x.is_zero() {
            c.push(Gate::MqX(self.xi_x.clone()));
        }
        let steps = crate::f2::gauss_cnot_synthesis(&self.cx_matrix)
            .expect("canonical CNOT-layer matrix is invertible by construction");
        for s in steps {
            c.push(Gate::Cnot { control: s.control, target: s.target });
        }
        if !self.xi_z.is_zero() {
            c.push(Gate::MqZ(self.xi_z.clone()));
        }
        for q in self.h_subset.iter_ones() {
            c.push(Gate::H(q));
        }
        c
    }
}

/// Canonical-form circuit with exact signs: the decomposition above plus
/// a trailing Pauli layer that makes the tableau match `op` exactly.
pub fn canonical_circuit(op: &SymplecticOp) -> Circuit {
    let mut c = canonical_form(op).to_circuit();
    append_pauli_fix(&mut c, op);
    c
}

// ---------------------------------------------------------------------------
// Stage 2: the five-gate CNOT layer.
// ---------------------------------------------------------------------------

/// Which of the two five-gate orderings to use for a CNOT layer. Both
/// realize the same tableau matrix from the same symmetric pair; they
/// differ in whether the sequence starts with an X-basis or a Z-basis
/// gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiveGateVariant {
    /// Temporal order `X(S1), Z(S1^-1), X(S1 + S2^-1), Z(S2), X(S2^-1)`.
    Primary,
    /// Temporal order `Z(S1^-1), X(S1), Z(S2 + S1^-1), X(S2^-1), Z(S2)`.
    Alternate,
}

/// A CNOT layer rewritten as five multiqubit gates.
#[derive(Debug, Clone)]
pub struct FiveGateCx {
    /// Exactly five `MqX`/`MqZ` gates in temporal order (no elision).
    pub gates: Vec<Gate>,
    /// The symmetric factorization `M^-T = S2 * S1` behind them.
    pub pair: SymmetricPair,
    pub variant: FiveGateVariant,
}

/// The five coupling matrices of a variant, in temporal order, tagged
/// with their basis.
pub(crate) fn five_couplings(
    pair: &SymmetricPair,
    variant: FiveGateVariant,
) -> [(MqBasis, F2Matrix); 5] {
    let s1 = &pair.s1;
    let s2 = &pair.s2;
    let s1_inv = s1.invert().expect("factor S1 is invertible");
    let s2_inv = s2.invert().expect("factor S2 is invertible");
    match variant {
        FiveGateVariant::Primary => [
            (MqBasis::X, s1.clone()),
            (MqBasis::Z, s1_inv.clone()),
            (MqBasis::X, s1.add(&s2_inv)),
            (MqBasis::Z, s2.clone()),
            (MqBasis::X, s2_inv),
        ],
        FiveGateVariant::Alternate => [
            (MqBasis::Z, s1_inv.clone()),
            (MqBasis::X, s1.clone()),
            (MqBasis::Z, s2.add(&s1_inv)),
            (MqBasis::X, s2_inv),
            (MqBasis::Z, s2.clone()),
        ],
    }
}

fn mq_gate(basis: MqBasis, xi: F2Matrix) -> Gate {
    match basis {
        MqBasis::X => Gate::MqX(xi),
        MqBasis::Z => Gate::MqZ(xi),
    }
}

/// Rewrites the CNOT layer with invertible state matrix `m` as exactly
/// five multiqubit gates whose composed tableau matrix is
/// `[[m, 0], [0, m^-T]]`. Signs are left to the caller's Pauli repair.
pub fn five_gate_cx_layer(
    m: &F2Matrix,
    variant: FiveGateVariant,
) -> Result<FiveGateCx, SynthesisError> {
    let b = m
        .invert()
        .map_err(|_| SynthesisError::Factorization(FactorizationError::Singular))?
        .transpose();
    let pair = factor_symmetric_pair(&b)?;
    let gates = five_couplings(&pair, variant)
        .into_iter()
        .map(|(basis, xi)| mq_gate(basis, xi))
        .collect();
    Ok(FiveGateCx { gates, pair, variant })
}

/// Replays the derivation of a five-gate identity step by step.
///
/// Starting from the block-diagonal target `T0 = [[m, 0], [0, m^-T]]`,
/// each elementary gate factor is peeled off one at a time — by left
/// multiplications for [`FiveGateVariant::Primary`], by right
/// multiplications for [`FiveGateVariant::Alternate`] (the composite
/// third gate counts as two elementary factors). The returned list holds
/// all seven intermediate matrices, beginning with `T0` and ending with
/// the identity; the intermediate block shapes are what the derivation
/// predicts, which the tests pin down.
pub fn replay_intermediates(
    m: &F2Matrix,
    pair: &SymmetricPair,
    variant: FiveGateVariant,
) -> Vec<F2Matrix> {
    let n = m.rows();
    let b = pair.product();
    let zero = F2Matrix::zero(n, n);
    let mut t = F2Matrix::from_quad(m, &zero, &zero, &b);
    let mut out = Vec::with_capacity(7);
    out.push(t.clone());
    let s1_inv = pair.s1.invert().expect("factor S1 is invertible");
    let s2_inv = pair.s2.invert().expect("factor S2 is invertible");
    let id = F2Matrix::identity(n);
    let x_gate = |xi: &F2Matrix| F2Matrix::from_quad(&id, xi, &zero, &id);
    let z_gate = |xi: &F2Matrix| F2Matrix::from_quad(&id, &zero, xi, &id);
    match variant {
        FiveGateVariant::Primary => {
            // T0 = X(s2^-1) Z(s2) X(s2^-1) X(s1) Z(s1^-1); left-cancel in
            // that order (each factor is its own inverse).
            for g in [
                x_gate(&s2_inv),
                z_gate(&pair.s2),
                x_gate(&s2_inv),
                x_gate(&pair.s1),
                z_gate(&s1_inv),
            ] {
                t = g.mul(&t);
                out.push(t.clone());
            }
        }
        FiveGateVariant::Alternate => {
            // T0 = Z(s2) X(s2^-1) Z(s2) Z(s1^-1) X(s1) Z(s1^-1); peel the
            // temporal-first factors by right multiplication.
            for g in [
                z_gate(&s1_inv),
                x_gate(&pair.s1),
                z_gate(&s1_inv),
                z_gate(&pair.s2),
                x_gate(&s2_inv),
            ] {
                t = t.mul(&g);
                out.push(t.clone());
            }
        }
    }
    // One final cancellation leaves the identity.
    t = match variant {
        FiveGateVariant::Primary => x_gate(&pair.s1).mul(&t),
        FiveGateVariant::Alternate => t.mul(&z_gate(&pair.s2)),
    };
    out.push(t);
    out
}

// ---------------------------------------------------------------------------
// Stage 3: sign repair and full compilation.
// ---------------------------------------------------------------------------

/// The Pauli layer that turns a matrix-correct candidate into an exact
/// implementation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliCorrection {
    pub mu: F2Vector,
    pub eta: F2Vector,
}

impl PauliCorrection {
    pub fn is_trivial(&self) -> bool {
        self.mu.is_zero() && self.eta.is_zero()
    }
}

/// Solves for the trailing Pauli layer that fixes all generator signs.
///
/// Appending `PauliLayer(mu, eta)` flips generator `j`'s sign by
/// `(S e_j) . (mu|eta)`, so the sign defect `d = r_target + r_candidate`
/// is repaired by the unique solution of `S^T p = d` with `p = (mu|eta)`.
/// Panics if the two tableaux differ in their matrix part — the layer
/// can only fix signs.
pub fn solve_pauli_correction(target: &SymplecticOp, candidate: &SymplecticOp) -> PauliCorrection {
    assert_eq!(
        target.matrix(),
        candidate.matrix(),
        "Pauli correction requires matching tableau matrices"
    );
    let mut d = target.signs().clone();
    d.xor_assign(candidate.signs());
    // S^T p = d  =>  p = S^-T d; over GF(2), S^-1 = omega S^T omega, so
    // S^-T = omega S omega.
    let w = crate::symplectic::omega(target.num_qubits());
    let p = w.mul(target.matrix()).mul(&w).mul_vec(&d);
    let (mu, eta) = p.halves();
    PauliCorrection { mu, eta }
}

/// Whether two tableaux agree up to a trailing Pauli layer — i.e. their
/// matrix parts are equal (any sign defect is always repairable).
pub fn equal_up_to_pauli(a: &SymplecticOp, b: &SymplecticOp) -> bool {
    a.matrix() == b.matrix()
}

pub(crate) fn append_pauli_fix(circuit: &mut Circuit, target: &SymplecticOp) {
    let fix = solve_pauli_correction(target, &circuit.to_symplectic());
    if !fix.is_trivial() {
        circuit.push(Gate::PauliLayer { mu: fix.mu, eta: fix.eta });
    }
}

/// Which compilation path produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompileVariant {
    /// General path: five-gate order with one end merged into the
    /// adjacent same-basis canonical coupling.
    Merged,
    /// The factored block was already symmetric. The default
    /// factorization then uses the trivial pair `(I, B)`, lowering two of
    /// the five gates to local gates.
    SymmetricShortcut,
}

/// Output of [`compile_clifford`].
#[derive(Debug, Clone)]
pub struct CompiledResult {
    /// Multiqubit gates, single-qubit gates, and (if needed) one trailing
    /// Pauli layer; implements the target tableau exactly.
    pub circuit: Circuit,
    /// Number of programmable multiqubit gates in `circuit`.
    pub mq_count: usize,
    /// The symmetric factorization used for the CNOT layer.
    pub pair: SymmetricPair,
    /// Qubit relabeling applied before compilation, if any (filled in by
    /// the power optimizer's permutation search, never by this function).
    pub permutation: Option<Vec<usize>>,
    pub variant: CompileVariant,
    /// Which five-gate temporal ordering the circuit uses.
    pub five_variant: FiveGateVariant,
}

/// Appends a multiqubit gate, eliding couplings that do not need one:
/// a zero coupling is dropped and a diagonal coupling lowers to
/// single-qubit gates (`S` on each flagged qubit in the Z basis, `H S H`
/// in the X basis) — exact identities, not approximations.
pub(crate) fn push_mq_elided(circuit: &mut Circuit, basis: MqBasis, xi: F2Matrix) {
    if xi.is_zero() {
        return;
    }
    if xi.is_diagonal() {
        for q in xi.diagonal().iter_ones() {
            match basis {
                MqBasis::Z => circuit.push(Gate::S(q)),
                MqBasis::X => {
                    circuit.push(Gate::H(q));
                    circuit.push(Gate::S(q));
                    circuit.push(Gate::H(q));
                }
            }
        }
        return;
    }
    circuit.push(mq_gate(basis, xi));
}

/// Compiles an arbitrary Clifford tableau into at most six programmable
/// multiqubit gates plus single-qubit gates, exactly (signs included).
///
/// The gate list follows the canonical form with the CNOT layer spliced
/// in as the alternate five-gate sequence; its trailing Z-basis gate and
/// the canonical `MQZ(xi_z)` are adjacent, so their couplings merge by
/// addition. Inputs whose CNOT layer is absent (pure CNOT circuits have
/// `xi_x = xi_z = 0`) compile to at most five gates, and a symmetric
/// factored block drops the count to three.
pub fn compile_clifford(op: &SymplecticOp) -> Result<CompiledResult, SynthesisError> {
    let form = canonical_form(op);
    let pair = factor_symmetric_pair(&layer_z_block(&form))?;
    Ok(compile_from_parts(op, &form, &pair, FiveGateVariant::Alternate))
}

/// Compiles with a caller-supplied symmetric pair and five-gate ordering
/// in place of the defaults — the hook the drive-power optimizer uses to
/// swap in a cheaper decomposition found by local search. Panics if
/// `pair` does not factor the canonical CNOT layer's Z block.
pub fn compile_clifford_with_pair(
    op: &SymplecticOp,
    pair: &SymmetricPair,
    variant: FiveGateVariant,
) -> CompiledResult {
    let form = canonical_form(op);
    assert_eq!(
        pair.product(),
        layer_z_block(&form),
        "pair must factor the CNOT layer's Z block"
    );
    compile_from_parts(op, &form, pair, variant)
}

/// The Z block `M^-T` of the canonical CNOT layer — the matrix the
/// symmetric-pair search factors.
pub fn layer_z_block(form: &CanonicalForm) -> F2Matrix {
    form.cx_matrix
        .invert()
        .expect("canonical CNOT-layer matrix is invertible")
        .transpose()
}

fn compile_from_parts(
    op: &SymplecticOp,
    form: &CanonicalForm,
    pair: &SymmetricPair,
    five_variant: FiveGateVariant,
) -> CompiledResult {
    let variant = if pair.product().is_symmetric() {
        CompileVariant::SymmetricShortcut
    } else {
        CompileVariant::Merged
    };
    let n = op.num_qubits();
    let mut circuit = Circuit::new(n);
    let [g1, g2, g3, g4, g5] = five_couplings(pair, five_variant);
    // One of the canonical couplings always sits next to a same-basis
    // five-gate end, so the two couplings add into a single gate: the
    // alternate ordering ends Z-basis next to MQZ(xi_z), the primary
    // ordering starts X-basis next to MQX(xi_x). (As unitaries the merge
    // leaves a diagonal Pauli residue, which the final correction layer
    // absorbs.) Either way the total stays within six gates.
    match five_variant {
        FiveGateVariant::Alternate => {
            push_mq_elided(&mut circuit, MqBasis::X, form.xi_x.clone());
            for (basis, xi) in [g1, g2, g3, g4] {
                push_mq_elided(&mut circuit, basis, xi);
            }
            let (last_basis, last_xi) = g5;
            debug_assert_eq!(last_basis, MqBasis::Z);
            push_mq_elided(&mut circuit, MqBasis::Z, last_xi.add(&form.xi_z));
        }
        FiveGateVariant::Primary => {
            let (head_basis, head_xi) = g1;
            debug_assert_eq!(head_basis, MqBasis::X);
            push_mq_elided(&mut circuit, MqBasis::X, head_xi.add(&form.xi_x));
            for (basis, xi) in [g2, g3, g4, g5] {
                push_mq_elided(&mut circuit, basis, xi);
            }
            push_mq_elided(&mut circuit, MqBasis::Z, form.xi_z.clone());
        }
    }
    for q in form.h_subset.iter_ones() {
        circuit.push(Gate::H(q));
    }
    append_pauli_fix(&mut circuit, op);
    let mq_count = circuit.mq_gate_count();
    debug_assert!(mq_count <= 6, "compilation must never exceed six multiqubit gates");
    CompiledResult {
        circuit,
        mq_count,
        pair: pair.clone(),
        permutation: None,
        variant,
        five_variant,
    }
}
