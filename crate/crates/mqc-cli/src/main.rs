//! `mqc`: compile Clifford circuits to a handful of programmable
//! multiqubit gates, verify circuit equivalence, and benchmark drive
//! power against a conventional baseline.

mod bench;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mqc_core::circuit::{Circuit, Gate};
use mqc_core::oracle::{DenseUnitary, MAX_DENSE_QUBITS};
use mqc_core::power::{circuit_power, permutation_reduce, PowerOptions};
use mqc_core::symplectic::{gen_permutation, SymplecticOp};
use mqc_core::synth::compile_clifford;

/// Verification cross-checks the dense unitaries up to this register
/// size; past it the tableau comparison stands alone.
const DENSE_CHECK_QUBITS: usize = 6;
const _: () = assert!(DENSE_CHECK_QUBITS <= MAX_DENSE_QUBITS);

/// Errors that end a command, split by exit code: verification and
/// synthesis failures exit 1, usage/parse/IO problems exit 2.
enum CliError {
    Failed(String),
    Usage(String),
}

impl CliError {
    fn report(&self) -> ExitCode {
        match self {
            CliError::Failed(msg) => {
                eprintln!("{msg}");
                ExitCode::from(1)
            }
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "mqc",
    about = "Clifford compiler targeting programmable all-to-all multiqubit gates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a circuit file into at most six multiqubit gates.
    Compile(CompileArgs),
    /// Check two circuit files for exact Clifford equivalence.
    Verify(VerifyArgs),
    /// Benchmark drive power of both methods over random CNOT layers.
    Bench(bench::BenchArgs),
}

#[derive(Args)]
struct CompileArgs {
    /// Input circuit file.
    input: PathBuf,
    /// Walker steps spent lowering drive power (0 = deterministic
    /// compile, no optimization).
    #[arg(long, default_value_t = 0)]
    budget: usize,
    /// Random qubit-relabeling candidates to try alongside the identity.
    #[arg(long, default_value_t = 0)]
    perms: usize,
    /// Exclude coupling-matrix diagonals from the power accounting.
    #[arg(long)]
    no_diagonal_power: bool,
    /// Seed for the optimizer's random choices.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the compiled circuit here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Reference circuit file.
    input: PathBuf,
    /// Candidate circuit file (e.g. compiler output).
    compiled: PathBuf,
    /// Output relabeling the candidate implements, as printed by
    /// `compile --perms` (comma-separated, e.g. 2,0,1).
    #[arg(long)]
    permutation: Option<String>,
}

fn read_circuit(path: &PathBuf) -> Result<Circuit, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    Circuit::from_text(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_permutation(spec: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let perm: Vec<usize> = spec
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("bad permutation '{spec}': {e}")))?;
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(CliError::Usage(format!(
            "permutation '{spec}' is not a permutation of 0..{n}"
        )));
    }
    Ok(perm)
}

fn cmd_compile(args: &CompileArgs) -> Result<(), CliError> {
    let circuit = read_circuit(&args.input)?;
    let op = circuit.to_symplectic();
    let options = PowerOptions { include_diagonal: !args.no_diagonal_power };
    let (result, power) = if args.budget == 0 && args.perms == 0 {
        let result = compile_clifford(&op)
            .map_err(|e| CliError::Failed(format!("compilation failed: {e}")))?;
        let power = circuit_power(&result.circuit, &options).total;
        (result, power)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let choice = permutation_reduce(&op, args.perms, args.budget, &options, &mut rng)
            .map_err(|e| CliError::Failed(format!("compilation failed: {e}")))?;
        (choice.result, choice.power)
    };
    let mut text = result.circuit.to_text();
    if let Some(perm) = &result.permutation {
        let joined: Vec<String> = perm.iter().map(usize::to_string).collect();
        text.push_str(&format!("# permutation {}\n", joined.join(",")));
    }
    text.push_str(&format!("# mq_count={} omega_nuc={:.9}\n", result.mq_count, power));
    match &args.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Appends a SWAP network (each swap three CNOTs) realizing the wire
/// relabeling `q -> perm[q]`, cycle by cycle.
fn append_relabeling(circuit: &mut Circuit, perm: &[usize]) {
    let n = perm.len();
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut q = perm[start];
        while q != start {
            visited[q] = true;
            cycle.push(q);
            q = perm[q];
        }
        for w in cycle.windows(2).rev() {
            let (a, b) = (w[0], w[1]);
            circuit.push(Gate::Cnot { control: a, target: b });
            circuit.push(Gate::Cnot { control: b, target: a });
            circuit.push(Gate::Cnot { control: a, target: b });
        }
    }
}

fn generator_name(j: usize, n: usize) -> String {
    if j < n {
        format!("X_{j}")
    } else {
        format!("Z_{}", j - n)
    }
}

/// Reports the first generator whose image differs, or None if the two
/// tableaux agree exactly (matrix and signs).
fn first_mismatch(target: &SymplecticOp, candidate: &SymplecticOp) -> Option<String> {
    let n = target.num_qubits();
    for j in 0..2 * n {
        let want = target.image_of_generator(j);
        let got = candidate.image_of_generator(j);
        if want != got {
            return Some(format!(
                "generator {}: expected {want}, got {got}",
                generator_name(j, n)
            ));
        }
    }
    None
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let reference = read_circuit(&args.input)?;
    let candidate = read_circuit(&args.compiled)?;
    let n = reference.num_qubits();
    if candidate.num_qubits() != n {
        return Err(CliError::Failed(format!(
            "qubit count mismatch: {} has {}, {} has {}",
            args.input.display(),
            n,
            args.compiled.display(),
            candidate.num_qubits()
        )));
    }
    let mut target = reference.to_symplectic();
    if let Some(spec) = &args.permutation {
        target = gen_permutation(&parse_permutation(spec, n)?).compose(&target);
    }
    let cand_op = candidate.to_symplectic();
    if let Some(msg) = first_mismatch(&target, &cand_op) {
        return Err(CliError::Failed(format!("not equivalent: {msg}")));
    }
    // Independent dense check where feasible: the tableau comparison is
    // exact, this guards the comparison machinery itself.
    if n <= DENSE_CHECK_QUBITS {
        let mut ref_for_dense = reference.clone();
        if let Some(spec) = &args.permutation {
            append_relabeling(&mut ref_for_dense, &parse_permutation(spec, n)?);
            debug_assert_eq!(
                ref_for_dense.to_symplectic(),
                target,
                "SWAP network must realize the requested relabeling"
            );
        }
        let u = DenseUnitary::from_circuit(&ref_for_dense);
        let v = DenseUnitary::from_circuit(&candidate);
        if !u.equal_up_to_global_phase(&v, 1e-9) {
            return Err(CliError::Failed(
                "not equivalent: dense unitaries differ beyond global phase".to_string(),
            ));
        }
    }
    println!("equivalent: all {} generator images match exactly", 2 * n);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Compile(args) => cmd_compile(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => bench::run(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
