//! The `bench` subcommand: sweep random linear reversible (CNOT) layers
//! over a grid of qubit counts, compile each with the constant-cost
//! five-gate method and the conventional merged-layer baseline, and
//! report total drive power per instance as CSV plus fitted power laws.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use mqc_core::f2::random_invertible;
use mqc_core::power::{baseline_power, fit_power_law, permutation_reduce, PowerOptions};
use mqc_core::symplectic::cnot_layer_op;

use crate::CliError;

#[derive(Args)]
pub struct BenchArgs {
    /// Comma-separated qubit counts to sweep.
    #[arg(long, value_delimiter = ',', default_value = "3,7,11,15,19,23,27,31,35,39,43,47,51,55,59,63")]
    sizes: Vec<usize>,
    /// Random CNOT-layer instances per size.
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Walker steps per instance (default: 200 per qubit).
    #[arg(long)]
    budget: Option<usize>,
    /// Random qubit-relabeling candidates per instance.
    #[arg(long, default_value_t = 4)]
    perms: usize,
    /// Master seed; per-instance seeds derive from it deterministically.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Exclude coupling-matrix diagonals from the power accounting.
    #[arg(long)]
    no_diagonal_power: bool,
    /// Which methods to run.
    #[arg(long, value_parser = ["constant-cost", "baseline", "both"], default_value = "both")]
    method: String,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct Job {
    n: usize,
    seed: u64,
}

struct InstanceRows {
    n: usize,
    seed: u64,
    /// (omega_nuc, mq_count, permutation_applied) per requested method.
    baseline: Option<(f64, usize, bool)>,
    constant: Option<(f64, usize, bool)>,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn run_instance(
    job: &Job,
    budget: Option<usize>,
    perms: usize,
    options: &PowerOptions,
    want_baseline: bool,
    want_constant: bool,
) -> Result<InstanceRows, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
    let m = random_invertible(job.n, &mut rng);
    let op = cnot_layer_op(&m).expect("random_invertible output is invertible");
    let baseline = want_baseline.then(|| {
        let report = baseline_power(&op, options);
        (report.power, report.mq_count, false)
    });
    let constant = if want_constant {
        let choice = permutation_reduce(
            &op,
            perms,
            budget.unwrap_or(200 * job.n),
            options,
            &mut rng,
        )
        .map_err(|e| CliError::Failed(format!("n={} seed={}: {e}", job.n, job.seed)))?;
        Some((choice.power, choice.result.mq_count, choice.result.permutation.is_some()))
    } else {
        None
    };
    Ok(InstanceRows { n: job.n, seed: job.seed, baseline, constant })
}

fn fit_summary(label: &str, samples: &[(f64, f64)]) -> String {
    match fit_power_law(samples) {
        Ok(fit) => format!(
            "{label}: omega_nuc ~ {:.3} * n^{:.3}  (beta = {:.3} +/- {:.3})",
            fit.prefactor, fit.exponent, fit.exponent, fit.exponent_stderr
        ),
        Err(e) => format!("{label}: no power-law fit ({e})"),
    }
}

pub fn run(args: &BenchArgs) -> Result<(), CliError> {
    if args.sizes.is_empty() {
        return Err(CliError::Usage("at least one size is required".into()));
    }
    if let Some(&bad) = args.sizes.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("size {bad} is below the minimum of 2")));
    }
    if args.instances == 0 {
        return Err(CliError::Usage("at least one instance per size is required".into()));
    }
    let want_baseline = args.method != "constant-cost";
    let want_constant = args.method != "baseline";
    let options = PowerOptions { include_diagonal: !args.no_diagonal_power };

    // Seeds are drawn in canonical job order, so a fixed master seed
    // pins every instance regardless of thread scheduling.
    let mut state = args.seed;
    let jobs: Vec<Job> = args
        .sizes
        .iter()
        .flat_map(|&n| (0..args.instances).map(move |_| n))
        .map(|n| Job { n, seed: splitmix64(&mut state) })
        .collect();

    let rows: Result<Vec<InstanceRows>, CliError> = jobs
        .par_iter()
        .map(|job| {
            run_instance(job, args.budget, args.perms, &options, want_baseline, want_constant)
        })
        .collect();
    let rows = rows?;

    let mut csv = String::from("n,method,omega_nuc,seed,mq_count,permutation_applied\n");
    for row in &rows {
        for (method, data) in [("baseline", &row.baseline), ("constant-cost", &row.constant)] {
            if let Some((omega, mq_count, perm_applied)) = data {
                csv.push_str(&format!(
                    "{},{},{:.9},{},{},{}\n",
                    row.n,
                    method,
                    omega,
                    row.seed,
                    mq_count,
                    u8::from(*perm_applied)
                ));
            }
        }
    }
    match &args.output {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }

    // Fit mean omega per size for each method; summary goes to stderr so
    // the CSV stream stays clean.
    for (label, pick) in [
        ("baseline", 0usize),
        ("constant-cost", 1usize),
    ] {
        let run_it = if pick == 0 { want_baseline } else { want_constant };
        if !run_it {
            continue;
        }
        let samples: Vec<(f64, f64)> = args
            .sizes
            .iter()
            .map(|&n| {
                let values: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.n == n)
                    .filter_map(|r| if pick == 0 { r.baseline } else { r.constant })
                    .map(|(omega, _, _)| omega)
                    .collect();
                (n as f64, values.iter().sum::<f64>() / values.len().max(1) as f64)
            })
            .collect();
        eprintln!("{}", fit_summary(label, &samples));
    }
    Ok(())
}
