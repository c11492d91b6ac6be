use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{error::ErrorKind, Args, Parser, Subcommand};
use log::info;

use rmc_core::automaton::Automaton;
use rmc_core::builders::{affine_relation, initial_token_ring, token_ring};
use rmc_core::engine::{run_with, EngineResult, Heuristics, Iteration, Mode, Outcome, RunConfig};
use rmc_core::format::{
    dot, dot_decomposition, emit, emit_decomposition, emit_provenance, parse_automaton, parse_transducer,
};
use rmc_core::transducer::{SamplingStrategy, Transducer};

/// Transducer iteration by increment detection and extrapolation.
#[derive(Parser)]
#[command(name = "rmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the reflexive-transitive closure of a transducer.
    Closure(RunArgs),
    /// Compute the set reachable from an initial automaton.
    Reach {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        initial: PathBuf,
    },
    /// Write a built-in model: `token-ring` or `affine:C`.
    Examples {
        name: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    transducer: PathBuf,
    /// `linear:A`, `exp:A` or `list:1,2,4`.
    #[arg(long, default_value = "linear:1")]
    sampling: SamplingStrategy,
    #[arg(long, default_value_t = 12)]
    max_samples: usize,
    #[arg(long, default_value_t = 50_000)]
    max_states: usize,
    #[arg(long, default_value_t = 300)]
    max_seconds: u64,
    /// Synchronization bound as a multiple of the maximal increment.
    #[arg(long, default_value_t = 2)]
    sync_mult: i64,
    /// Disable dominance pruning.
    #[arg(long)]
    no_heuristics: bool,
    /// Write DOT files for samples, decompositions and the result here.
    #[arg(long)]
    emit_dot: Option<PathBuf>,
    /// Write the resulting automaton in text format here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RMC_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Closure(args) => {
            let t = read_transducer(&args.transducer)?;
            engine(&args, Mode::Closure, &t, None)
        }
        Command::Reach { run, initial } => {
            let t = read_transducer(&run.transducer)?;
            let text = read(&initial)?;
            let a = parse_automaton(&text).with_context(|| format!("{}", initial.display()))?;
            engine(&run, Mode::Reach, &t, Some(&a))
        }
        Command::Examples { name, out } => {
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            if name == "token-ring" {
                write(&out.join("token-ring.txt"), &emit(token_ring().automaton()))?;
                write(&out.join("token-ring-initial.txt"), &emit(&initial_token_ring()))?;
            } else if let Some(c) = name.strip_prefix("affine:") {
                let c: i64 = c.parse().with_context(|| format!("bad constant in `{name}`"))?;
                write(&out.join(format!("affine-{c}.txt")), &emit(affine_relation(c).automaton()))?;
            } else {
                bail!("unknown example `{name}` (expected token-ring or affine:C)");
            }
            Ok(0)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_transducer(path: &Path) -> Result<Transducer> {
    let text = read(path)?;
    parse_transducer(&text).with_context(|| format!("{}", path.display()))
}

fn engine(args: &RunArgs, mode: Mode, t: &Transducer, a: Option<&Automaton>) -> Result<u8> {
    let cfg = RunConfig {
        mode,
        sampling: args.sampling.clone(),
        max_samples: args.max_samples,
        max_states: args.max_states,
        max_duration: Duration::from_secs(args.max_seconds),
        sync_multiplier: args.sync_mult,
        heuristics: if args.no_heuristics { Heuristics::none() } else { Heuristics::default() },
    };
    if let Some(dir) = &args.emit_dot {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut emit_error = None;
    let mut hook = |it: &Iteration| {
        if let (Some(dir), None) = (&args.emit_dot, &emit_error) {
            if let Err(e) = emit_iteration(dir, it) {
                emit_error = Some(e);
            }
        }
    };
    let result = run_with(t, a, &cfg, &mut hook)?;
    if let Some(e) = emit_error {
        return Err(e);
    }
    report(args, &result)
}

fn emit_iteration(dir: &Path, it: &Iteration) -> Result<()> {
    let s = it.sample;
    if let (Some(last), Some(g)) = (&it.last, &it.grow) {
        write(&dir.join(format!("sample-{s}.dot")), &dot_decomposition(last, g, &format!("sample {s}")))?;
        write(&dir.join(format!("decomposition-{s}.txt")), &emit_decomposition(g))?;
    }
    if let Some(e) = &it.extrapolation {
        write(&dir.join(format!("extrapolation-{s}.dot")), &dot(&e.plain, &format!("extrapolation {s}")))?;
        write(&dir.join(format!("provenance-{s}.txt")), &emit_provenance(e))?;
    }
    Ok(())
}

fn report(args: &RunArgs, result: &EngineResult) -> Result<u8> {
    print!("{}", result.trace_text());
    println!("elapsed_ms {}", result.elapsed.as_millis());
    if let Some(a) = result.outcome.automaton() {
        if let Some(path) = &args.out {
            write(path, &emit(a))?;
            info!("wrote {}", path.display());
        }
        if let Some(dir) = &args.emit_dot {
            write(&dir.join("result.dot"), &dot(a, "result"))?;
        }
    }
    Ok(match result.outcome {
        Outcome::ExactClosure(_) => 0,
        Outcome::SafeOverApproximation(_) => 2,
        Outcome::GaveUp(_) => 3,
    })
}
