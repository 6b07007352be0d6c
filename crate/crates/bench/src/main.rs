use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reliacut::enumeration::{exact_reliability_with_limit, DEFAULT_ENUMERATION_LIMIT};
use reliacut::estimators::estimate;
use reliacut::generate::{random_network, ArcProbabilities};
use reliacut::{parse_network, required_sample_size, Method, Network, RandomStream};
use reliacut_bench::format::sig10;
use reliacut_bench::inspect::{cuts_view, estimate_view};
use reliacut_bench::{
    emit_report, run_experiment, BenchError, ExperimentConfig, ReportFormat, RunOptions,
};

#[derive(Parser)]
#[command(
    name = "reliacut",
    version,
    about = "Two-terminal network reliability: exact enumeration and Monte Carlo estimators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact reliability by full state enumeration.
    Exact {
        file: PathBuf,
        /// Refuse networks with more arcs than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        max_arcs: usize,
    },
    /// One Monte Carlo estimate, printed as JSON.
    Estimate {
        #[arg(long)]
        method: Method,
        #[arg(long)]
        nsim: u64,
        #[arg(long)]
        seed: u64,
        /// Supervector length for batmcs.
        #[arg(long, default_value_t = 2)]
        beta: usize,
        file: PathBuf,
    },
    /// Trials needed for a given absolute error at a given confidence.
    SampleSize {
        #[arg(long)]
        reliability: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        alpha: f64,
    },
    /// Layers, layer-cuts and the selected super-cut, printed as JSON.
    Cuts { file: PathBuf },
    /// Repeated-run experiment driven by a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "csv")]
        format: ReportFormat,
        /// Record wall times (makes output differ between invocations).
        #[arg(long)]
        timing: bool,
    },
    /// Random connected network file on standard output.
    GenRandom {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        arcs: usize,
        /// Working probability of every arc.
        #[arg(long)]
        prob: f64,
        /// Draw each probability uniformly from [prob, prob-max] instead.
        #[arg(long)]
        prob_max: Option<f64>,
        #[arg(long)]
        seed: u64,
    },
}

fn load(path: &Path) -> Result<Network<f64>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_network(&text).map_err(|source| BenchError::Network {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, BenchError> {
    serde_json::to_string_pretty(value).map_err(|e| BenchError::Report(e.to_string()))
}

fn run(command: Command) -> Result<String, BenchError> {
    match command {
        Command::Exact { file, max_arcs } => {
            let net = load(&file)?;
            let r = exact_reliability_with_limit(&net, max_arcs)
                .map_err(|source| BenchError::Network { path: file, source })?;
            Ok(sig10(r))
        }
        Command::Estimate {
            method,
            nsim,
            seed,
            beta,
            file,
        } => {
            let net = load(&file)?;
            let e =
                estimate(&net, method, nsim, beta, &RandomStream::new(seed)).map_err(|source| {
                    BenchError::Estimation {
                        context: method.to_string(),
                        source,
                    }
                })?;
            to_json(&estimate_view(&e))
        }
        Command::SampleSize {
            reliability,
            epsilon,
            alpha,
        } => required_sample_size(reliability, epsilon, alpha)
            .map(|n| n.to_string())
            .map_err(|e| BenchError::Config(e.to_string())),
        Command::Cuts { file } => {
            let net = load(&file)?;
            let view =
                cuts_view(&net).map_err(|source| BenchError::Network { path: file, source })?;
            to_json(&view)
        }
        Command::Bench {
            config,
            out,
            format,
            timing,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let opts = RunOptions {
                timing,
                ..RunOptions::default()
            };
            let report = run_experiment(&cfg, &opts)?;
            let mut buf = Vec::new();
            emit_report(&report, format, &mut buf)?;
            std::fs::write(&out, buf).map_err(|source| BenchError::Io {
                path: out.clone(),
                source,
            })?;
            Ok(format!(
                "wrote {} rows to {}",
                report.rows.len(),
                out.display()
            ))
        }
        Command::GenRandom {
            nodes,
            arcs,
            prob,
            prob_max,
            seed,
        } => {
            let probs = match prob_max {
                Some(high) => ArcProbabilities::Uniform { low: prob, high },
                None => ArcProbabilities::Fixed(prob),
            };
            let net: Network<f64> = random_network(nodes, arcs, probs, seed)
                .map_err(|e| BenchError::Config(e.to_string()))?;
            Ok(net.to_file_string().trim_end().to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let to_stderr = matches!(cli.command, Command::Bench { .. });
    match run(cli.command) {
        Ok(text) => {
            if to_stderr {
                eprintln!("{text}");
            } else {
                let mut stdout = std::io::stdout().lock();
                let _ = writeln!(stdout, "{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("reliacut: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
