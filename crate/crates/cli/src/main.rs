use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qchancap::commands::{
    capacity_sweep, parse_range, simulate_sweep, CapacityParams, EntropyParams, Kind,
    OptimizerParams, PurityParams, SimulateParams, ThresholdParams, TypicalParams,
};
use qchancap::manifest::read_manifest;
use qchancap::spec::Builtin;
use qchancap::{ChannelSpec, CliError, CliResult, Document, InputSpec, Invocation};

#[derive(Parser)]
#[command(name = "qchancap", version, about = "Coherent information and capacity of noisy quantum channels")]
struct Cli {
    /// Worker threads for restarts and trials (0 = all cores). Output does
    /// not depend on this.
    #[arg(long, global = true, env = "QCHANCAP_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Random,
    Bell,
    Basis,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Random => Kind::Random,
            KindArg::Bell => Kind::Bell,
            KindArg::Basis => Kind::Basis,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Entropies and coherent information of one channel use.
    Entropy {
        /// `builtin:<name>[:<x>]`, inline JSON, or a JSON file.
        #[arg(long)]
        channel: String,
        /// `maximally-mixed`, an inline JSON matrix, or a JSON file.
        #[arg(long, default_value = "maximally-mixed")]
        input: String,
    },
    /// Maximize coherent information over input states.
    Capacity {
        #[arg(long)]
        channel: Option<String>,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        /// `start:stop:points` over the noise parameter; prints CSV. The
        /// family comes from `--channel` (depolarizing if omitted).
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Depolarizing noise level where the coherent information of `I/2` vanishes.
    Threshold {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Entropy-typical set of an i.i.d. source.
    Typical {
        #[arg(long, value_delimiter = ',', required = true)]
        probs: Vec<f64>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Random-code transmission: output overlaps and projection decoding.
    Simulate {
        #[arg(long)]
        channel: String,
        #[arg(long, required_unless_present = "n_sweep", conflicts_with = "n_sweep")]
        n: Option<usize>,
        /// Comma-separated block lengths; prints CSV of medians over `--seeds`.
        #[arg(long, value_delimiter = ',')]
        n_sweep: Option<Vec<usize>>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_enum, default_value = "random")]
        kind: KindArg,
        #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0.99)]
        weight: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, requires = "n_sweep")]
        seeds: usize,
    },
    /// Monte Carlo mean output purity against its closed-form prediction.
    PurityCheck {
        #[arg(long)]
        channel: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-run the command recorded in an output document or manifest and
    /// check that the result checksum matches.
    Replay { manifest: PathBuf },
}

enum Output {
    Json(Invocation),
    Csv(String),
    Replay(PathBuf),
}

fn plan(command: Command) -> CliResult<Output> {
    Ok(match command {
        Command::Entropy { channel, input } => Output::Json(Invocation::Entropy(EntropyParams {
            channel: ChannelSpec::parse(&channel)?,
            input: InputSpec::parse(&input)?,
        })),
        Command::Capacity {
            channel,
            restarts,
            seed,
            tol,
            max_iters,
            sweep,
        } => {
            let optimizer = OptimizerParams {
                restarts,
                seed,
                tol,
                max_iters,
            };
            match sweep {
                Some(range) => {
                    let family = match channel.as_deref().map(ChannelSpec::parse).transpose()? {
                        None => Builtin::Depolarizing,
                        Some(ChannelSpec::Builtin { builtin, .. }) => builtin,
                        Some(ChannelSpec::Kraus { .. }) => {
                            return Err(CliError::usage("sweep: needs a built-in channel family"))
                        }
                    };
                    Output::Csv(capacity_sweep(family, &parse_range(&range)?, &optimizer)?)
                }
                None => {
                    let channel = channel.ok_or_else(|| CliError::usage("channel: required without --sweep"))?;
                    Output::Json(Invocation::Capacity(CapacityParams {
                        channel: ChannelSpec::parse(&channel)?,
                        optimizer,
                    }))
                }
            }
        }
        Command::Threshold { tol } => Output::Json(Invocation::Threshold(ThresholdParams { tol })),
        Command::Typical { probs, n, delta } => {
            Output::Json(Invocation::Typical(TypicalParams { probs, n, delta }))
        }
        Command::Simulate {
            channel,
            n,
            n_sweep,
            k,
            kind,
            trials,
            weight,
            seed,
            seeds,
        } => {
            let params = SimulateParams {
                channel: ChannelSpec::parse(&channel)?,
                n: n.unwrap_or(0),
                k,
                kind: kind.into(),
                trials: trials as usize,
                weight,
                seed,
            };
            match n_sweep {
                Some(ns) => Output::Csv(simulate_sweep(&params, &ns, seeds)?),
                None => Output::Json(Invocation::Simulate(params)),
            }
        }
        Command::PurityCheck {
            channel,
            n,
            trials,
            seed,
        } => Output::Json(Invocation::PurityCheck(PurityParams {
            channel: ChannelSpec::parse(&channel)?,
            n,
            trials: trials as usize,
            seed,
        })),
        Command::Replay { manifest } => Output::Replay(manifest),
    })
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error worth reporting.
    let _ = out.write_all(text.as_bytes());
    let _ = out.flush();
}

fn execute(command: Command, argv: Vec<String>) -> CliResult<()> {
    let start = Instant::now();
    match plan(command)? {
        Output::Csv(csv) => emit(&csv),
        Output::Json(invocation) => {
            eprintln!("qchancap: running {}", invocation.name());
            let result = invocation.run()?;
            emit(&Document::new(invocation, result, argv).to_pretty());
        }
        Output::Replay(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("manifest: cannot read {}: {e}", path.display())))?;
            let recorded = read_manifest(&text)?;
            eprintln!("qchancap: replaying {}", recorded.invocation.name());
            let result = recorded.invocation.run()?;
            let doc = Document::new(recorded.invocation.clone(), result, recorded.argv.clone());
            emit(&doc.to_pretty());
            if doc.manifest.checksum != recorded.checksum {
                return Err(CliError::Validation(format!(
                    "replay: checksum {} does not match recorded {}",
                    doc.manifest.checksum, recorded.checksum
                )));
            }
            eprintln!("qchancap: checksum matches");
        }
    }
    eprintln!("qchancap: done in {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(cli.command, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
