use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dynscc_cli::bench::bench;
use dynscc_cli::generate::{generate, Model, Params};
use dynscc_cli::runner::{run, Options};
use dynscc_cli::script::Script;
use dynscc_cli::CliError;

#[derive(Parser)]
#[command(name = "dynscc", version, about = "Incremental SCCs with single-failure queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Replay a workload script, printing one line per query.
    Run {
        file: PathBuf,
        /// Diff every answer against brute force; exit 1 on the first mismatch.
        #[arg(long)]
        oracle: bool,
        /// Print engine counters after the run.
        #[arg(long)]
        stats: bool,
        /// Time incremental insertion against rebuilding per insertion.
        #[arg(long)]
        bench: bool,
        /// With --bench, rebuild the baseline only after every k-th insertion.
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Write a seeded random workload script to stdout.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform | cycle-first
        #[arg(long, default_value = "uniform")]
        model: Model,
        /// Expected queries after each insertion.
        #[arg(long, default_value_t = 0.0)]
        query_rate: f64,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<ExitCode, CliError> {
    match Cli::parse().cmd {
        Cmd::Run {
            file,
            oracle,
            stats,
            bench: timed,
            stride,
        } => {
            let text = std::fs::read_to_string(&file).map_err(|source| CliError::Io {
                path: file.display().to_string(),
                source,
            })?;
            let script = Script::parse(&text)?;
            let report = run(&script, Options { oracle, stats })?;
            for a in &report.answers {
                println!("{a}");
            }
            if let Some(d) = &report.divergence {
                eprintln!(
                    "divergence at line {}: `{}`: engine `{}`, oracle `{}`",
                    d.line, d.query, d.engine, d.oracle
                );
                return Ok(ExitCode::from(1));
            }
            for l in &report.stats {
                println!("{l}");
            }
            if timed {
                for l in bench(&script, stride)?.lines() {
                    println!("{l}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Generate {
            n,
            m,
            seed,
            model,
            query_rate,
        } => {
            print!(
                "{}",
                generate(Params {
                    n,
                    m,
                    seed,
                    model,
                    query_rate
                })?
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
