use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use shufsort::bench::{run_bench, write_records, BenchConfig, OutputFormat};
use shufsort::claims::{check_exhaustive, check_model, estimate_kernel, simulate_claim2};
use shufsort::combinatorics::{descent_distribution_capped, DEFAULT_DISTRIBUTION_CAP};
use shufsort::datagen::read_sequence;
use shufsort::disorder::{part_disorders, partition_bounds, step_down_runs};
use shufsort::sorting::run_decomposition;
use shufsort::{Error, KeySequence, Policy, ShuffleConfig};

/// Step-down-runs disorder, Eulerian tables and shuffle-then-sort benchmarks.
#[derive(Debug, Parser)]
#[command(name = "shufsort", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Measure the disorder of a file of newline-delimited integer keys.
    Measure(MeasureArgs),
    /// Print a row (or one entry) of the descent-count table.
    Eulerian(EulerianArgs),
    /// Check the descent model by enumeration and simulation.
    ValidateClaims(ValidateArgs),
    /// Run shuffle-then-sort experiments and emit CSV or JSON records.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Input file, one key per line.
    input: PathBuf,
    /// Also report the disorder of each of this many contiguous parts.
    #[arg(long, visible_alias = "k")]
    parts: Option<usize>,
}

#[derive(Debug, Args)]
struct EulerianArgs {
    /// Sequence length.
    n: usize,
    /// Only print the count for this many descents.
    k: Option<usize>,
    /// Largest n accepted.
    #[arg(long, default_value_t = DEFAULT_DISTRIBUTION_CAP)]
    cap: usize,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Enumerate all n! permutations for each listed n (n <= 9).
    #[arg(long, value_delimiter = ',')]
    exhaustive: Vec<usize>,
    /// Check p_less(n, z) > 1/2 above the threshold for each listed n.
    #[arg(long, value_delimiter = ',')]
    model: Vec<usize>,
    /// Estimate the one-swap kernel at this length.
    #[arg(long)]
    kernel_n: Option<usize>,
    /// Disorder level for the kernel estimate (default: threshold + 3).
    #[arg(long)]
    kernel_z: Option<usize>,
    #[arg(long, default_value_t = 2000)]
    kernel_trials: u64,
    /// Run the improved-parts simulation.
    #[arg(long)]
    claim2: bool,
    #[arg(long, default_value_t = 16)]
    claim2_l: u64,
    #[arg(long, value_delimiter = ',', default_values_t = [1u64, 8, 16])]
    claim2_c: Vec<u64>,
    /// Length of each simulated part.
    #[arg(long, default_value_t = 8)]
    claim2_part_n: usize,
    /// A part counts as improved when its disorder is below this.
    #[arg(long, default_value_t = 4)]
    claim2_z: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0.01)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ValidateArgs {
    fn nothing_selected(&self) -> bool {
        self.exhaustive.is_empty() && self.model.is_empty() && self.kernel_n.is_none() && !self.claim2
    }
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [5000usize, 10000, 20000, 30000, 40000, 50000, 60000, 70000, 80000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 16)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    z: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// blind, guarded or fixed:<s>
    #[arg(long, default_value = "guarded")]
    policy: Policy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Benchmark this sequence instead of generated permutations.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run repetitions concurrently; wall-clock columns become noisy.
    #[arg(long)]
    parallel: bool,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    /// A check ran and did not hold (exit 1).
    Validation(String),
    /// Bad input or arguments (exit 2).
    Input(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::SortMismatch(_) => Failure::Validation(err.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(err: io::Error) -> Self {
        Failure::Input(err.to_string())
    }
}

fn load(path: &PathBuf) -> Result<KeySequence, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    read_sequence(BufReader::new(file)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn measure(args: &MeasureArgs) -> Result<(), Failure> {
    let seq = load(&args.input)?;
    let keys = seq.as_slice();
    let mut out = io::stdout().lock();
    writeln!(out, "n={}", keys.len())?;
    writeln!(out, "M={}", step_down_runs(keys))?;
    writeln!(out, "runs={}", run_decomposition(keys).len())?;
    if let Some(k) = args.parts {
        let parts = partition_bounds(keys.len(), k)?;
        let report = part_disorders(keys, &parts)?;
        let per_part = report.per_part.clone().unwrap_or_default();
        writeln!(out, "parts={}", parts.part_count())?;
        writeln!(out, "per_part={}", join(&per_part))?;
        writeln!(out, "part_sum={}", per_part.iter().sum::<usize>())?;
        writeln!(out, "boundary_descents={}", report.boundary_descents())?;
    }
    Ok(())
}

fn eulerian(args: &EulerianArgs) -> Result<(), Failure> {
    let dist = descent_distribution_capped(args.n, args.cap)?;
    let mut out = io::stdout().lock();
    match args.k {
        Some(k) if k >= args.n => {
            return Err(Failure::Input(format!("k = {k} outside [0, {}]", args.n - 1)));
        }
        Some(k) => writeln!(out, "{}", dist.count(k))?,
        None => writeln!(out, "{}", join(dist.counts()))?,
    }
    Ok(())
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn validate(args: &ValidateArgs) -> Result<(), Failure> {
    let all = args.nothing_selected();
    let exhaustive: Vec<usize> = if all { (1..=8).collect() } else { args.exhaustive.clone() };
    let model: Vec<usize> = if all { vec![312] } else { args.model.clone() };
    let kernel_n = if all { Some(312) } else { args.kernel_n };
    let claim2 = all || args.claim2;

    let mut failures = 0usize;
    let mut out = io::stdout().lock();
    for &n in &exhaustive {
        let check = check_exhaustive(n)?;
        failures += usize::from(!check.pass);
        writeln!(
            out,
            "exhaustive n={n}: histogram [{}] vs table [{}] {}",
            join(&check.histogram),
            check.expected.join(" "),
            verdict(check.pass)
        )?;
    }
    for &n in &model {
        let check = check_model(n)?;
        failures += usize::from(!check.pass);
        let detail = match check.first_failure {
            Some(z) => format!("p_less <= 1/2 at z={z}"),
            None => format!("p_less > 1/2 for all z > {}", check.threshold),
        };
        writeln!(
            out,
            "model n={n}: {detail}; p_less(n, n-1) = {} {}",
            check.p_top,
            verdict(check.pass)
        )?;
    }
    if let Some(n) = kernel_n {
        let z = args.kernel_z.unwrap_or(shufsort::combinatorics::claim1_threshold(n) + 3);
        let est = estimate_kernel(n, z, args.kernel_trials, args.seed)?;
        writeln!(
            out,
            "kernel n={n} z={z}: one blind swap lowers disorder in {}/{} trials ({:.4}), mean change {:+.4}, \
             model p_less = {:.4} [sampler: {:?}]",
            est.improved, est.trials, est.empirical, est.mean_change, est.model, est.sampler
        )?;
    }
    if claim2 {
        let checks = simulate_claim2(
            args.claim2_l,
            &args.claim2_c,
            args.claim2_part_n,
            args.claim2_z,
            args.trials,
            args.seed,
            args.tolerance,
        )?;
        for check in checks {
            failures += usize::from(!check.pass);
            writeln!(
                out,
                "claim2 l={} c={}: exact {} ~ {:.6}, simulated {:.6} ({} trials, tol {}) {}",
                check.l,
                check.c,
                check.exact,
                check.exact_f64,
                check.empirical,
                args.trials,
                check.tolerance,
                verdict(check.pass)
            )?;
        }
    }
    if failures > 0 {
        return Err(Failure::Validation(format!("{failures} check(s) failed")));
    }
    Ok(())
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let input = args.input.as_ref().map(load).transpose()?;
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        repetitions: args.reps,
        shuffle: ShuffleConfig {
            k: args.k,
            z: args.z,
            m: args.m,
            policy: args.policy,
            seed: args.seed,
        },
        input,
        parallel: args.parallel,
    };
    let records = run_bench(&config)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            let mut writer = BufWriter::new(file);
            write_records(&mut writer, &records, args.format)?;
            writer.flush()?;
        }
        None => write_records(io::stdout().lock(), &records, args.format)?,
    }
    eprintln!(
        "policy={} k={} z={} m={} seed={} records={}",
        args.policy,
        args.k,
        args.z,
        args.m,
        args.seed,
        records.len()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Measure(args) => measure(args),
        Command::Eulerian(args) => eulerian(args),
        Command::ValidateClaims(args) => validate(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("shufsort: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("shufsort: {msg}");
            ExitCode::from(2)
        }
    }
}
