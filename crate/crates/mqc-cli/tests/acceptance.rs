//! Acceptance gate for the whole deliverable. Each test is one
//! criterion; it prints `criterion N (<name>): PASS` on success, so a
//! `--nocapture` run reads as a checklist. Tolerances and instance
//! counts are part of the contract and are not lowered for speed.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mqc_core::circuit::Circuit;
use mqc_core::f2::{random_invertible, F2Matrix};
use mqc_core::oracle::{brute_force_pairs, DenseUnitary};
use mqc_core::power::{fit_power_law, five_gate_power, walker_optimize, PowerOptions};
use mqc_core::symfactor::{factor_symmetric_pair, ProductOrder, SymmetricPair};
use mqc_core::symplectic::{cnot_layer_op, SymplecticOp};
use mqc_core::synth::{
    canonical_form, compile_clifford, compile_clifford_with_pair, five_gate_cx_layer,
    layer_z_block, replay_intermediates, CompileVariant, FiveGateVariant,
};

fn pass(number: usize, name: &str) {
    println!("criterion {number} ({name}): PASS");
}

fn random_clifford(n: usize, rng: &mut ChaCha8Rng) -> SymplecticOp {
    Circuit::random(n, 6 * n + 10, rng).to_symplectic()
}

// ---------------------------------------------------------------------------
// 1. Gate-count bounds.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_gate_count_bounds() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for n in [2usize, 4, 8, 16] {
        for _ in 0..200 {
            let op = random_clifford(n, &mut rng);
            let result = compile_clifford(&op).expect("random Cliffords compile");
            assert!(
                result.mq_count <= 6,
                "general Clifford at n={n} took {} multiqubit gates",
                result.mq_count
            );
        }
        for _ in 0..200 {
            let m = random_invertible(n, &mut rng);
            let op = cnot_layer_op(&m).expect("invertible state matrix");
            let result = compile_clifford(&op).expect("CNOT layers compile");
            assert!(
                result.mq_count <= 5,
                "CNOT layer at n={n} took {} multiqubit gates",
                result.mq_count
            );
        }
        for _ in 0..200 {
            // L L^T is symmetric and invertible whenever L is, and a
            // symmetric state matrix gives a symmetric factored block.
            let l = random_invertible(n, &mut rng);
            let m = l.mul(&l.transpose());
            let op = cnot_layer_op(&m).expect("L L^T stays invertible");
            let result = compile_clifford(&op).expect("symmetric instances compile");
            assert_eq!(result.variant, CompileVariant::SymmetricShortcut);
            assert!(
                result.mq_count <= 3,
                "symmetric-block instance at n={n} took {} multiqubit gates",
                result.mq_count
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}, budget is one minute");
    pass(1, "gate-count bounds");
}

// ---------------------------------------------------------------------------
// 2. Five-factor product identity over GF(2).
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_five_factor_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for n in 2..=32 {
        for _ in 0..500 {
            let m = random_invertible(n, &mut rng);
            let expected = {
                let zero = F2Matrix::zero(n, n);
                let d = m.invert().unwrap().transpose();
                F2Matrix::from_quad(&m, &zero, &zero, &d)
            };
            for variant in [FiveGateVariant::Primary, FiveGateVariant::Alternate] {
                let five = five_gate_cx_layer(&m, variant).expect("factorization exists");
                assert_eq!(five.gates.len(), 5, "exactly five gates, no elision here");
                // Temporal gate order composes right-to-left as matrices.
                let mut product = F2Matrix::identity(2 * n);
                for gate in &five.gates {
                    let g = gate.to_symplectic(n);
                    product = g.matrix().mul(&product);
                }
                assert_eq!(
                    product, expected,
                    "five-factor product must equal the block-diagonal form \
                     exactly (n={n}, {variant:?})"
                );
            }
        }
    }
    pass(2, "five-factor product identity");
}

// ---------------------------------------------------------------------------
// 3. Derivation replay hits the displayed block forms.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_derivation_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    for i in 0..100 {
        let n = 2 + (i % 15); // covers every n in 2..=16
        let m = random_invertible(n, &mut rng);
        let zero = F2Matrix::zero(n, n);
        let id = F2Matrix::identity(n);
        for variant in [FiveGateVariant::Primary, FiveGateVariant::Alternate] {
            let five = five_gate_cx_layer(&m, variant).unwrap();
            let (s1, s2) = (&five.pair.s1, &five.pair.s2);
            let s1_inv = s1.invert().unwrap();
            let s2_inv = s2.invert().unwrap();
            let b = s2.mul(s1);
            let steps = replay_intermediates(&m, &five.pair, variant);
            assert_eq!(steps.len(), 7, "six cancellation steps plus the start");
            assert_eq!(steps[0], F2Matrix::from_quad(&m, &zero, &zero, &b));
            let predicted: [F2Matrix; 5] = match variant {
                FiveGateVariant::Primary => [
                    F2Matrix::from_quad(&m, s1, &zero, &b),
                    F2Matrix::from_quad(&m, s1, &s1_inv, &zero),
                    F2Matrix::from_quad(&zero, s1, &s1_inv, &zero),
                    F2Matrix::from_quad(&id, s1, &s1_inv, &zero),
                    F2Matrix::from_quad(&id, s1, &zero, &id),
                ],
                FiveGateVariant::Alternate => [
                    F2Matrix::from_quad(&m, &zero, s2, &b),
                    F2Matrix::from_quad(&m, &s2_inv, s2, &zero),
                    F2Matrix::from_quad(&zero, &s2_inv, s2, &zero),
                    F2Matrix::from_quad(&id, &s2_inv, s2, &zero),
                    F2Matrix::from_quad(&id, &zero, s2, &id),
                ],
            };
            for (step, want) in predicted.iter().enumerate() {
                assert_eq!(
                    &steps[step + 1],
                    want,
                    "intermediate {} diverges from the derivation (n={n}, {variant:?})",
                    step + 1
                );
            }
            assert!(steps[6].is_identity(), "the derivation must close");
        }
    }
    pass(3, "derivation replay");
}

// ---------------------------------------------------------------------------
// 4. Unitary exactness against the dense oracle.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_unitary_exactness() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    for n in 2..=6 {
        let dim = 1usize << n;
        for _ in 0..100 {
            let reference = Circuit::random(n, 30, &mut rng);
            let op = reference.to_symplectic();
            let u_dag = DenseUnitary::from_circuit(&reference).dagger();
            let form = canonical_form(&op);
            let pair = factor_symmetric_pair(&layer_z_block(&form)).unwrap();
            let candidates = [
                compile_clifford(&op).unwrap(),
                compile_clifford_with_pair(&op, &pair, FiveGateVariant::Alternate),
                compile_clifford_with_pair(&op, &pair, FiveGateVariant::Primary),
            ];
            for compiled in &candidates {
                let v = DenseUnitary::from_circuit(&compiled.circuit);
                let w = u_dag.mul(&v);
                let mut trace = Complex64::new(0.0, 0.0);
                for i in 0..dim {
                    trace += w.entry(i, i);
                }
                assert!(
                    (trace.norm() - dim as f64).abs() < 1e-9,
                    "|tr(U^dag V)| = {} but dim = {dim} (n={n}, {:?})",
                    trace.norm(),
                    compiled.five_variant
                );
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}, budget is two minutes");
    pass(4, "unitary exactness");
}

// ---------------------------------------------------------------------------
// 5. Tableau exactness through n = 64.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_tableau_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(205);
    let sizes = [2usize, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];
    for i in 0..100 {
        let n = sizes[i % sizes.len()];
        let target = Circuit::random(n, 10 * n, &mut rng).to_symplectic();
        let result = compile_clifford(&target).expect("random Cliffords compile");
        assert_eq!(
            result.circuit.to_symplectic(),
            target,
            "compiled tableau (matrix and signs) must match exactly at n={n}"
        );
    }
    pass(5, "tableau exactness");
}

// ---------------------------------------------------------------------------
// 6. CNOT-layer block property.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_cnot_block_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(206);
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let op = Circuit::random_cnot(n, 4 * n, &mut rng).to_symplectic();
        let (a, b, c, d) = op.blocks();
        assert!(b.is_zero() && c.is_zero(), "CNOT layers are block-diagonal");
        let id = F2Matrix::identity(n);
        assert_eq!(d.transpose().mul(&a), id, "Z-block transposed times X-block is I");
        assert_eq!(a.transpose().mul(&d), id, "X-block transposed times Z-block is I");
    }
    pass(6, "CNOT-layer block property");
}

// ---------------------------------------------------------------------------
// 7. Drive-power figure reproduction (property form).
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_power_sweep_reproduction() {
    let started = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("sweep.csv");
    // Power accounting: coupling diagonals are excluded (the CLI's
    // --no-diagonal-power). Diagonal entries are single-qubit phase
    // terms, realized as free virtual frame updates rather than drive
    // power on the intended all-to-all hardware; with them included the
    // five-gate method's small constant overhead is charged at the
    // smallest sizes even though no beam ever drives it.
    let out = Command::new(env!("CARGO_BIN_EXE_mqc"))
        .args([
            "bench",
            "--instances",
            "20",
            "--budget",
            "40",
            "--perms",
            "4",
            "--seed",
            "1",
            "--no-diagonal-power",
            "--output",
        ])
        .arg(&csv_path)
        .output()
        .expect("bench binary runs");
    assert!(out.status.success(), "bench failed: {}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut per_size: std::collections::BTreeMap<usize, (Vec<f64>, Vec<f64>)> =
        std::collections::BTreeMap::new();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let n: usize = fields[0].parse().unwrap();
        let omega: f64 = fields[2].parse().unwrap();
        let entry = per_size.entry(n).or_default();
        match fields[1] {
            "baseline" => entry.0.push(omega),
            "constant-cost" => entry.1.push(omega),
            other => panic!("unexpected method column {other:?}"),
        }
    }
    assert_eq!(per_size.len(), 16, "default grid sweeps sixteen sizes");

    let mut baseline_means = Vec::new();
    let mut constant_means = Vec::new();
    for (&n, (baseline, constant)) in &per_size {
        assert!(baseline.len() >= 20 && constant.len() >= 20, "20 instances per size");
        let b = baseline.iter().sum::<f64>() / baseline.len() as f64;
        let c = constant.iter().sum::<f64>() / constant.len() as f64;
        let ratio = if b > c { b / c } else { c / b };
        assert!(
            ratio < 2.0,
            "mean power differs by {ratio:.3}x at n={n} (baseline {b:.3}, constant-cost {c:.3})"
        );
        baseline_means.push((n as f64, b));
        constant_means.push((n as f64, c));
    }
    for (label, samples) in [("baseline", &baseline_means), ("constant-cost", &constant_means)] {
        let fit = fit_power_law(samples).expect("sixteen means determine a fit");
        assert!(
            (1.2..=1.7).contains(&fit.exponent),
            "{label} scaling exponent {:.3} outside [1.2, 1.7]",
            fit.exponent
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1800), "took {elapsed:?}, budget is thirty minutes");
    pass(7, "drive-power sweep reproduction");
}

// ---------------------------------------------------------------------------
// 8. Optimizer contracts.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_optimizer_contracts() {
    let opts = PowerOptions::default();
    for seed in 50..55 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 3..=6 {
            for budget in [0usize, 37, 150] {
                let b = random_invertible(n, &mut rng);
                let walked = walker_optimize(&b, budget, &opts, &mut rng).unwrap();
                assert!(!walked.trace.is_empty(), "trace always holds the start");
                for w in walked.trace.windows(2) {
                    assert!(
                        w[1].1 <= w[0].1,
                        "trace must be non-increasing, got {:?}",
                        walked.trace
                    );
                }
                let last = walked.trace.last().unwrap();
                assert!(
                    (last.1 - walked.power).abs() < 1e-12,
                    "trace must end at the reported power"
                );
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(208);
    for _ in 0..5 {
        let b = random_invertible(3, &mut rng);
        let optimum = brute_force_pairs(&b, ProductOrder::S2S1)
            .into_iter()
            .map(|(s1, s2)| {
                five_gate_power(&SymmetricPair { s1, s2, order: ProductOrder::S2S1 }, &opts)
            })
            .fold(f64::INFINITY, f64::min);
        assert!(optimum.is_finite(), "every invertible block factors");
        let initial = five_gate_power(&factor_symmetric_pair(&b).unwrap(), &opts);
        let walked = walker_optimize(&b, 400, &opts, &mut rng).unwrap();
        assert!(
            walked.power >= optimum - 1e-9,
            "walker {:.9} beat the exhaustive optimum {:.9}",
            walked.power,
            optimum
        );
        assert!(
            walked.power <= initial + 1e-12,
            "walker must never end worse than its deterministic start"
        );
    }
    pass(8, "optimizer contracts");
}

// ---------------------------------------------------------------------------
// 9. Determinism.
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_determinism() {
    let dir = tempfile::tempdir().unwrap();

    let input = dir.path().join("in.mqc");
    std::fs::write(
        &input,
        "qubits 4\nCNOT 0 1\nCNOT 1 2\nCNOT 2 3\nCNOT 3 0\nCNOT 1 3\nCNOT 2 0\n",
    )
    .unwrap();
    let compile_once = || {
        let out = Command::new(env!("CARGO_BIN_EXE_mqc"))
            .args(["compile", input.to_str().unwrap(), "--perms", "3", "--budget", "25", "--seed", "9"])
            .output()
            .expect("compile binary runs");
        assert!(out.status.success(), "compile failed: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    assert_eq!(compile_once(), compile_once(), "same seed must compile to identical bytes");

    let bench_once = |path: &std::path::Path| {
        let out = Command::new(env!("CARGO_BIN_EXE_mqc"))
            .args([
                "bench", "--sizes", "3,5,7", "--instances", "3", "--budget", "15", "--perms",
                "2", "--seed", "33", "--output",
            ])
            .arg(path)
            .output()
            .expect("bench binary runs");
        assert!(out.status.success(), "bench failed: {}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).expect("CSV written")
    };
    let first = bench_once(&dir.path().join("a.csv"));
    let second = bench_once(&dir.path().join("b.csv"));
    assert!(!first.is_empty() && first == second, "same seed must produce byte-identical CSV");

    let mut rng = ChaCha8Rng::seed_from_u64(209);
    let op = random_clifford(5, &mut rng);
    let a = compile_clifford(&op).unwrap();
    let b = compile_clifford(&op).unwrap();
    assert_eq!(a.circuit, b.circuit, "in-process compilation is deterministic too");
    pass(9, "determinism");
}
