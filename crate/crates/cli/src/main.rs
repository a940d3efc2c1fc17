//! `ltl-enforce`: replays a recorded trace through decentralized enforcers.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use enforce_core::enforcement::Algorithm;
use enforce_core::error::Error as CoreError;
use enforce_core::event::{AlphabetPartition, Trace};
use enforce_core::ltl::parse_formula;
use enforce_core::ltl::sat::BottomCheck;
use enforce_core::netsim::Network;

use crate::report::{check_oracle, OracleMismatch};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BottomArg {
    Exact,
    Syntactic,
}

/// Enforce an LTL specification on a trace with cooperating enforcers, each
/// observing one component of the alphabet.
#[derive(Debug, Parser)]
#[command(name = "ltl-enforce", version)]
struct Cli {
    /// Specification text, or `@path` to read it from a file.
    #[arg(long)]
    formula: String,
    /// Alphabet partition, one `M<i>: a, b` line per enforcer.
    #[arg(long)]
    partition: PathBuf,
    /// Input trace, one `{p,q}` event per line.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum, default_value = "global")]
    algorithm: AlgorithmArg,
    /// Corrected trace; local traces go to `<out>.M<i>`. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-round message log.
    #[arg(long)]
    log: Option<PathBuf>,
    /// Check every step against the brute-force oracle.
    #[arg(long)]
    check_oracle: bool,
    /// Longest loop and extension explored by the oracle.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    loop_bound: u64,
    /// Machine-readable `key=value` statistics.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// How obligations equivalent to false are detected.
    #[arg(long, value_enum, default_value = "exact")]
    bottom_check: BottomArg,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn local_path(out: &Path, k: usize) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(format!(".M{k}"));
    PathBuf::from(s)
}

fn run(cli: &Cli) -> Result<()> {
    let formula_text = match cli.formula.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => cli.formula.clone(),
    };
    let formula = parse_formula(formula_text.trim())
        .map_err(CoreError::from)
        .context("invalid formula")?;
    let partition = AlphabetPartition::parse(&read(&cli.partition)?)
        .with_context(|| format!("invalid partition {}", cli.partition.display()))?;
    let trace = Trace::parse(&read(&cli.trace)?, Some(&partition.global()))
        .with_context(|| format!("invalid trace {}", cli.trace.display()))?;
    let algorithm = match cli.algorithm {
        AlgorithmArg::Global => Algorithm::Global,
        AlgorithmArg::Local => Algorithm::Local,
    };
    let check = match cli.bottom_check {
        BottomArg::Exact => BottomCheck::Exact,
        BottomArg::Syntactic => BottomCheck::Syntactic,
    };

    let mut network = Network::new(formula.clone(), partition.clone(), algorithm, check)?;
    let (output, logs) = network.run_trace(&trace)?;

    match &cli.out {
        Some(path) => {
            write(path, &output.to_string())?;
            for k in 1..=partition.len() {
                write(&local_path(path, k), &output.project(partition.component(k)).to_string())?;
            }
        }
        None => print!("{output}"),
    }
    if let Some(path) = &cli.log {
        let text: String = logs.iter().map(|l| format!("{l}\n")).collect();
        write(path, &text)?;
    }
    eprint!("{}", report::table(algorithm, &logs));
    if let Some(path) = &cli.stats {
        write(path, &report::key_values(algorithm, &logs))?;
    }
    if cli.check_oracle {
        check_oracle(&formula, &trace, &output, &logs, algorithm, cli.loop_bound as usize)?;
        eprintln!("oracle check passed");
    }
    Ok(())
}

/// 0 success, 1 usage or format error, 2 unsatisfiable specification,
/// 3 oracle mismatch, 4 internal protocol error.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<OracleMismatch>().is_some() {
        return 3;
    }
    let Some(mut core) = err.downcast_ref::<CoreError>() else {
        return 1;
    };
    while let CoreError::AtTimestamp { source, .. } = core {
        core = source;
    }
    match core {
        CoreError::UnsatisfiableSpecification => 2,
        CoreError::Parse(_)
        | CoreError::Format { .. }
        | CoreError::Partition(_)
        | CoreError::UnreachableAlphabet(_) => 1,
        CoreError::NotTdnf(_)
        | CoreError::EmptyDomain
        | CoreError::Protocol { .. }
        | CoreError::Deadlock
        | CoreError::NextFormulaFalse
        | CoreError::AtTimestamp { .. } => 4,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
