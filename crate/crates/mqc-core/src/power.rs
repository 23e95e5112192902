//! Drive-power accounting and optimization.
//!
//! A programmable multiqubit gate with coupling matrix `xi` costs drive
//! power proportional to the nuclear norm (sum of absolute eigenvalues)
//! of `xi` read as a real symmetric 0/1 matrix. This module scores
//! circuits by that measure and shrinks it three ways:
//!
//! - a local-search **walker** over the symmetric-pair factorizations of
//!   a CNOT layer's Z block, since every factorization yields a valid
//!   five-gate sequence but their couplings differ wildly in norm;
//! - a **qubit relabeling** search: compiling `P * U` instead of `U`
//!   costs nothing (the permutation is classical bookkeeping on the
//!   outputs) and can trivialize the CNOT layer outright;
//! - elision-aware scoring, so couplings that lower to single-qubit
//!   gates are free.
//!
//! For comparison there is a conventional **baseline**: Gauss-Jordan
//! CNOT synthesis with adjacent CNOTs greedily merged into
//! Hadamard-dressed all-to-all CZ layers, which is exact but needs a
//! number of layers that grows with the qubit count.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::f2::{gauss_cnot_synthesis, CnotStep, F2Matrix, F2Vector};
use crate::symfactor::{
    apply_move, factor_symmetric_pair, intertwiner_space, perturb_factorization,
    FactorizationError, SymmetricPair,
};
use crate::symplectic::{gen_permutation, MqBasis, SymplecticOp};
use crate::synth::{
    append_pauli_fix, canonical_form, compile_clifford_with_pair, five_couplings, layer_z_block,
    push_mq_elided, CompiledResult, FiveGateVariant, SynthesisError,
};

/// How coupling matrices are scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerOptions {
    /// Whether diagonal coupling entries (single-qubit phase terms)
    /// contribute to a gate's power. Hardware that drives them through
    /// the same global beam pays for them; hardware with independent
    /// single-qubit control does not.
    pub include_diagonal: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { include_diagonal: true }
    }
}

// ---------------------------------------------------------------------------
// Nuclear norm.
// ---------------------------------------------------------------------------

/// Eigenvalues of a symmetric matrix given as a row-major `n x n` real
/// buffer, by cyclic Jacobi rotations. The buffer is destroyed.
fn jacobi_eigenvalues(a: &mut [f64], n: usize) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    // Frobenius norm of the strict upper triangle below 1e-12 is far
    // tighter than anything the power accounting needs; Jacobi converges
    // quadratically so the sweep cap is generous.
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if libm::fabs(apq) < 1e-30 {
                    continue;
                }
                let tau = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = t * c;
                // A <- J^T A J with the rotation in the (p, q) plane.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

fn coupling_as_real(m: &F2Matrix) -> Vec<f64> {
    let n = m.rows();
    let mut a = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            if m.get(i, j) {
                a[i * n + j] = 1.0;
            }
        }
    }
    a
}

/// Nuclear norm (sum of absolute eigenvalues) of a symmetric GF(2)
/// matrix lifted to a real 0/1 matrix.
pub fn nuclear_norm(m: &F2Matrix) -> f64 {
    assert!(m.is_square(), "nuclear norm requires a square matrix");
    assert!(m.is_symmetric(), "nuclear norm requires a symmetric matrix");
    let n = m.rows();
    let mut a = coupling_as_real(m);
    // fold from +0.0: an empty or all-zero spectrum must report exactly
    // 0.0, not the float Sum identity -0.0, which would leak into output.
    jacobi_eigenvalues(&mut a, n).iter().fold(0.0, |acc, l| acc + libm::fabs(*l))
}

/// Power cost of driving one multiqubit gate with coupling `xi`, with
/// elision semantics: couplings the compiler would lower to single-qubit
/// gates (zero or diagonal) are free.
pub fn gate_power(xi: &F2Matrix, options: &PowerOptions) -> f64 {
    if xi.is_zero() || xi.is_diagonal() {
        return 0.0;
    }
    if options.include_diagonal {
        nuclear_norm(xi)
    } else {
        nuclear_norm(&xi.with_zero_diagonal())
    }
}

/// Per-gate power of a circuit as written: one entry per `MqX`/`MqZ`
/// gate, in order, each the nuclear norm of its (optionally
/// diagonal-stripped) coupling. Local gates and Pauli layers are free.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub per_gate: Vec<f64>,
    pub total: f64,
}

pub fn circuit_power(circuit: &Circuit, options: &PowerOptions) -> PowerReport {
    let mut per_gate = Vec::new();
    for g in circuit.gates() {
        let xi = match g {
            Gate::MqX(xi) | Gate::MqZ(xi) => xi,
            _ => continue,
        };
        let p = if options.include_diagonal {
            nuclear_norm(xi)
        } else {
            nuclear_norm(&xi.with_zero_diagonal())
        };
        per_gate.push(p);
    }
    // fold from +0.0 so a circuit without multiqubit gates reports 0.0
    // rather than the float Sum identity -0.0.
    let total = per_gate.iter().fold(0.0, |acc, p| acc + p);
    PowerReport { per_gate, total }
}

// ---------------------------------------------------------------------------
// Factorization objectives and the local-search walker.
// ---------------------------------------------------------------------------

/// Total power of the five-gate sequence a symmetric pair generates,
/// under whichever of the two orderings is cheaper (the compiler picks
/// the same way).
pub fn five_gate_power(pair: &SymmetricPair, options: &PowerOptions) -> f64 {
    [FiveGateVariant::Alternate, FiveGateVariant::Primary]
        .iter()
        .map(|&variant| {
            five_couplings(pair, variant)
                .iter()
                .map(|(_, xi)| gate_power(xi, options))
                .sum()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Power of a full compilation that uses `pair` for its CNOT layer under
/// one fixed five-gate ordering: the canonical X coupling, the five-gate
/// sequence, and the canonical Z coupling, with the same-basis neighbors
/// merged (alternate ordering merges its Z tail into `MQZ(xi_z)`, primary
/// merges `MQX(xi_x)` into its X head). Matches [`circuit_power`] of
/// [`compile_clifford_with_pair`]'s output exactly, but skips building
/// the circuit.
pub fn merged_couplings_power_variant(
    pair: &SymmetricPair,
    xi_x: &F2Matrix,
    xi_z: &F2Matrix,
    variant: FiveGateVariant,
    options: &PowerOptions,
) -> f64 {
    let [g1, g2, g3, g4, g5] = five_couplings(pair, variant);
    match variant {
        FiveGateVariant::Alternate => {
            let mut total = gate_power(xi_x, options);
            for (_, xi) in [g1, g2, g3, g4] {
                total += gate_power(&xi, options);
            }
            total + gate_power(&g5.1.add(xi_z), options)
        }
        FiveGateVariant::Primary => {
            let mut total = gate_power(&g1.1.add(xi_x), options);
            for (_, xi) in [g2, g3, g4, g5] {
                total += gate_power(&xi, options);
            }
            total + gate_power(xi_z, options)
        }
    }
}

/// Picks whichever five-gate ordering compiles `pair` more cheaply and
/// returns it with its power (ties go to the alternate ordering, the
/// compiler default).
pub fn merged_couplings_choice(
    pair: &SymmetricPair,
    xi_x: &F2Matrix,
    xi_z: &F2Matrix,
    options: &PowerOptions,
) -> (FiveGateVariant, f64) {
    let alternate =
        merged_couplings_power_variant(pair, xi_x, xi_z, FiveGateVariant::Alternate, options);
    let primary =
        merged_couplings_power_variant(pair, xi_x, xi_z, FiveGateVariant::Primary, options);
    if primary < alternate {
        (FiveGateVariant::Primary, primary)
    } else {
        (FiveGateVariant::Alternate, alternate)
    }
}

/// Power of a full compilation that uses `pair` for its CNOT layer, under
/// the cheaper of the two five-gate orderings — the walker objective for
/// whole-Clifford runs.
pub fn merged_couplings_power(
    pair: &SymmetricPair,
    xi_x: &F2Matrix,
    xi_z: &F2Matrix,
    options: &PowerOptions,
) -> f64 {
    merged_couplings_choice(pair, xi_x, xi_z, options).1
}

/// Outcome of a walker run.
#[derive(Debug, Clone)]
pub struct WalkerResult {
    /// Best factorization found.
    pub pair: SymmetricPair,
    /// Its objective value.
    pub power: f64,
    /// `(step, objective)` at step 0 and at every improvement of the
    /// best-so-far; the objective column is non-increasing.
    pub trace: Vec<(usize, f64)>,
}

/// Greedy local search over the symmetric factorizations of `b` with a
/// caller-supplied objective.
///
/// Starts from the deterministic factorization, perturbs along random
/// intertwiner-basis directions, accepts strict improvements, and
/// restarts from a random factorization after a stall of
/// `max(20, budget / 10)` rejected steps. With `budget = 0` the result
/// is the starting factorization itself.
pub fn walker_optimize_with<R: Rng + ?Sized, F: FnMut(&SymmetricPair) -> f64>(
    b: &F2Matrix,
    budget: usize,
    rng: &mut R,
    mut objective: F,
) -> Result<WalkerResult, FactorizationError> {
    let initial = factor_symmetric_pair(b)?;
    let basis = intertwiner_space(b);
    let mut cur = initial.clone();
    let mut cur_power = objective(&cur);
    let mut best = cur.clone();
    let mut best_power = cur_power;
    let mut trace = vec![(0usize, best_power)];
    let stall_limit = 20.max(budget / 10);
    let mut stall = 0usize;
    for step in 1..=budget {
        let move_index = rng.gen_range(0..basis.len());
        let accepted = match perturb_factorization(&cur, &basis, move_index, rng) {
            Some(cand) => {
                let p = objective(&cand);
                if p < cur_power - 1e-12 {
                    cur = cand;
                    cur_power = p;
                    true
                } else {
                    false
                }
            }
            None => false,
        };
        if accepted {
            stall = 0;
            if cur_power < best_power - 1e-12 {
                best = cur.clone();
                best_power = cur_power;
                trace.push((step, best_power));
            }
        } else {
            stall += 1;
        }
        if stall >= stall_limit {
            stall = 0;
            // Jump to a fresh random factorization (keeping the best).
            for _ in 0..16 {
                let mut combo = F2Vector::zero(basis.len());
                for i in 0..basis.len() {
                    combo.set(i, rng.gen_bool(0.5));
                }
                if let Some(fresh) = apply_move(&initial, &basis, &combo) {
                    cur = fresh;
                    cur_power = objective(&cur);
                    if cur_power < best_power - 1e-12 {
                        best = cur.clone();
                        best_power = cur_power;
                        trace.push((step, best_power));
                    }
                    break;
                }
            }
        }
    }
    Ok(WalkerResult { pair: best, power: best_power, trace })
}

/// [`walker_optimize_with`] under the standard five-gate objective.
pub fn walker_optimize<R: Rng + ?Sized>(
    b: &F2Matrix,
    budget: usize,
    options: &PowerOptions,
    rng: &mut R,
) -> Result<WalkerResult, FactorizationError> {
    walker_optimize_with(b, budget, rng, |pair| five_gate_power(pair, options))
}

// ---------------------------------------------------------------------------
// Qubit-relabeling search.
// ---------------------------------------------------------------------------

/// Outcome of [`permutation_reduce`].
#[derive(Debug, Clone)]
pub struct PermutationChoice {
    /// The chosen relabeling: the compiled circuit implements
    /// `gen_permutation(&permutation) ∘ op`, so recovering `op` is pure
    /// output relabeling (free, classical).
    pub permutation: Vec<usize>,
    /// Compilation of the relabeled operator with the walker's best
    /// pair. Its `permutation` field is `Some` iff the relabeling is
    /// non-trivial.
    pub result: CompiledResult,
    /// Total circuit drive power.
    pub power: f64,
    /// Improvement trace of the final walker run on the winning
    /// candidate.
    pub trace: Vec<(usize, f64)>,
}

fn identity_permutation(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (q, &p) in perm.iter().enumerate() {
        inv[p] = q;
    }
    inv
}

fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p = identity_permutation(n);
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        p.swap(i, j);
    }
    p
}

/// Compiles `op` under the cheapest of several qubit relabelings.
///
/// Left-composing a permutation costs nothing on all-to-all hardware —
/// it renames the outputs — but changes the CNOT layer the five-gate
/// rewrite has to factor, sometimes drastically (a layer that *is* a
/// permutation relabels to the identity and vanishes). Candidates are
/// the identity, the layer's own inverse when the layer is a
/// permutation matrix, and `extra_candidates` random relabelings. Each
/// is screened with a short walker run (`min(20, budget)` steps); the
/// winner gets the full `budget`.
pub fn permutation_reduce<R: Rng + ?Sized>(
    op: &SymplecticOp,
    extra_candidates: usize,
    budget: usize,
    options: &PowerOptions,
    rng: &mut R,
) -> Result<PermutationChoice, SynthesisError> {
    let n = op.num_qubits();
    let mut candidates = vec![identity_permutation(n)];
    if let Some(sigma) = canonical_form(op).cx_matrix.as_permutation() {
        let inv = invert_permutation(&sigma);
        if !candidates.contains(&inv) {
            candidates.push(inv);
        }
    }
    for _ in 0..extra_candidates {
        let p = random_permutation(n, rng);
        if !candidates.contains(&p) {
            candidates.push(p);
        }
    }
    let screen_budget = budget.min(20);
    let mut winner: Option<(Vec<usize>, SymplecticOp, f64)> = None;
    for (idx, perm) in candidates.iter().enumerate() {
        let relabeled = gen_permutation(perm).compose(op);
        let form = canonical_form(&relabeled);
        let b = layer_z_block(&form);
        let walked = walker_optimize_with(&b, screen_budget, rng, |pair| {
            merged_couplings_power(pair, &form.xi_x, &form.xi_z, options)
        });
        let walked = match walked {
            Ok(w) => w,
            // The identity candidate must factor (it is what a plain
            // compile would do); other candidates may be skipped.
            Err(e) if idx == 0 => return Err(e.into()),
            Err(_) => continue,
        };
        let better = match &winner {
            None => true,
            Some((_, _, best)) => walked.power < best - 1e-12,
        };
        if better {
            winner = Some((perm.clone(), relabeled, walked.power));
        }
    }
    let (perm, relabeled, _) = winner.expect("identity candidate always factors");
    let form = canonical_form(&relabeled);
    let b = layer_z_block(&form);
    let walked = walker_optimize_with(&b, budget, rng, |pair| {
        merged_couplings_power(pair, &form.xi_x, &form.xi_z, options)
    })
    .expect("winning candidate factored during screening");
    let (variant, _) = merged_couplings_choice(&walked.pair, &form.xi_x, &form.xi_z, options);
    let mut result = compile_clifford_with_pair(&relabeled, &walked.pair, variant);
    if perm != identity_permutation(n) {
        result.permutation = Some(perm.clone());
    }
    let power = circuit_power(&result.circuit, options).total;
    debug_assert!(
        libm::fabs(power - walked.power) < 1e-9,
        "objective must match the compiled circuit's power"
    );
    Ok(PermutationChoice { permutation: perm, result, power, trace: walked.trace })
}

// ---------------------------------------------------------------------------
// Conventional baseline: merged Hadamard-dressed CZ layers.
// ---------------------------------------------------------------------------

/// One merged layer: the CZ coupling `xi` (zero diagonal) conjugated by
/// Hadamards on the `dressed` qubits, i.e. temporally
/// `H(dressed), MQZ(xi), H(dressed)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CzLayer {
    pub xi: F2Matrix,
    pub dressed: F2Vector,
}

/// Greedily merges a CNOT sequence into Hadamard-dressed CZ layers.
///
/// Each `CNOT(c, t)` is `H(t), CZ(c, t), H(t)`; consecutive CNOTs share
/// one layer as long as no control lands on a dressed qubit and no
/// target lands on an undressed endpoint — precisely when
/// `c ∉ targets-so-far` and `t ∉ controls-so-far`, which lets all the
/// inner Hadamards cancel. The reconstruction is exact as a unitary,
/// not merely up to phases.
pub fn merge_cnot_layers(n: usize, steps: &[CnotStep]) -> Vec<CzLayer> {
    let mut layers = Vec::new();
    let mut xi = F2Matrix::zero(n, n);
    let mut controls = F2Vector::zero(n);
    let mut targets = F2Vector::zero(n);
    let mut active = false;
    for step in steps {
        let (c, t) = (step.control, step.target);
        assert!(c != t && c < n && t < n, "malformed CNOT step");
        if active && (targets.get(c) || controls.get(t)) {
            if !xi.is_zero() {
                layers.push(CzLayer { xi: xi.clone(), dressed: targets.clone() });
            }
            xi = F2Matrix::zero(n, n);
            controls = F2Vector::zero(n);
            targets = F2Vector::zero(n);
        }
        xi.set(c, t, !xi.get(c, t));
        xi.set(t, c, !xi.get(t, c));
        controls.set(c, true);
        targets.set(t, true);
        active = true;
    }
    if active && !xi.is_zero() {
        layers.push(CzLayer { xi, dressed: targets });
    }
    layers
}

/// Expands merged layers back into a circuit of Hadamards and `MQZ`
/// gates (exactly equal to the original CNOT sequence as a unitary).
pub fn layers_to_circuit(n: usize, layers: &[CzLayer]) -> Circuit {
    let mut c = Circuit::new(n);
    for layer in layers {
        for q in layer.dressed.iter_ones() {
            c.push(Gate::H(q));
        }
        c.push(Gate::MqZ(layer.xi.clone()));
        for q in layer.dressed.iter_ones() {
            c.push(Gate::H(q));
        }
    }
    c
}

/// A conventional compilation for comparison purposes.
#[derive(Debug, Clone)]
pub struct BaselineReport {
    /// Exact implementation of the target (signs included).
    pub circuit: Circuit,
    /// Total drive power of its multiqubit gates.
    pub power: f64,
    /// Number of multiqubit gates.
    pub mq_count: usize,
    /// Number of merged CZ layers standing in for the CNOT layer.
    pub layer_count: usize,
}

/// Compiles `op` the conventional way: canonical form with the CNOT
/// layer realized by Gauss-Jordan synthesis and greedy layer merging
/// rather than the five-gate rewrite. The layer count — and with it the
/// drive power — grows with qubit count, which is the comparison the
/// constant-cost path is measured against.
pub fn baseline_power(op: &SymplecticOp, options: &PowerOptions) -> BaselineReport {
    let n = op.num_qubits();
    let form = canonical_form(op);
    let steps = gauss_cnot_synthesis(&form.cx_matrix)
        .expect("canonical CNOT-layer matrix is invertible");
    let layers = merge_cnot_layers(n, &steps);
    let mut circuit = Circuit::new(n);
    push_mq_elided(&mut circuit, MqBasis::X, form.xi_x.clone());
    for g in layers_to_circuit(n, &layers).gates() {
        circuit.push(g.clone());
    }
    push_mq_elided(&mut circuit, MqBasis::Z, form.xi_z.clone());
    for q in form.h_subset.iter_ones() {
        circuit.push(Gate::H(q));
    }
    append_pauli_fix(&mut circuit, op);
    let power = circuit_power(&circuit, options).total;
    let mq_count = circuit.mq_gate_count();
    BaselineReport { circuit, power, mq_count, layer_count: layers.len() }
}

// ---------------------------------------------------------------------------
// Power-law fitting for scaling sweeps.
// ---------------------------------------------------------------------------

/// Error from [`fit_power_law`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitError {
    /// Fewer than three samples, a non-positive coordinate, or no
    /// spread in the abscissa — no meaningful power law exists.
    DegenerateFit,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::DegenerateFit => write!(f, "samples do not determine a power law"),
        }
    }
}

impl core::error::Error for FitError {}

/// Least-squares fit of `y = prefactor * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub prefactor: f64,
    /// Standard error of the exponent from the log-log residuals.
    pub exponent_stderr: f64,
}

/// Fits a power law through `(x, y)` samples by linear regression in
/// log-log space.
pub fn fit_power_law(samples: &[(f64, f64)]) -> Result<FitResult, FitError> {
    let m = samples.len();
    if m < 3 {
        return Err(FitError::DegenerateFit);
    }
    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for &(x, y) in samples {
        if x <= 0.0 || y <= 0.0 {
            return Err(FitError::DegenerateFit);
        }
        xs.push(libm::log(x));
        ys.push(libm::log(y));
    }
    let xbar = xs.iter().sum::<f64>() / m as f64;
    let ybar = ys.iter().sum::<f64>() / m as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..m {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    if sxx < 1e-12 {
        return Err(FitError::DegenerateFit);
    }
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let mut sse = 0.0;
    for i in 0..m {
        let r = ys[i] - (intercept + exponent * xs[i]);
        sse += r * r;
    }
    let exponent_stderr = libm::sqrt(sse / (m as f64 - 2.0) / sxx);
    Ok(FitResult { exponent, prefactor: libm::exp(intercept), exponent_stderr })
}
