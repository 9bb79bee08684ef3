use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use koszul_cli::{run, Command, ExitStatus, RunConfig};
use koszul_core::{Char, Grading, RankMethod};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    VerifyComplex,
    Certify,
    Cancellation,
    Rank,
    Pipeline,
    Char2Search,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Modular,
    Exact,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GradingArg {
    Full,
    Parity,
    None,
}

/// Koszul complex checks, certificate sweeps and cancellation analysis.
/// Output is JSON lines followed by a summary object.
#[derive(Parser, Debug)]
#[command(name = "koszul", version)]
struct Cli {
    #[arg(value_enum)]
    command: CommandArg,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Characteristic of the ground field.
    #[arg(long = "char", default_value = "0", value_parser = ["0", "2"])]
    characteristic: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_enum, default_value = "modular")]
    rank_method: MethodArg,
    #[arg(long, value_enum, default_value = "full")]
    grading: GradingArg,
    /// Write the JSON lines here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitStatus::Usage as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let prime_bits = match std::env::var("KOSZUL_PRIME_BITS") {
        Ok(v) => match v.parse() {
            Ok(b) => b,
            Err(_) => {
                eprintln!("KOSZUL_PRIME_BITS must be an integer, got {v:?}");
                return ExitCode::from(ExitStatus::Usage as u8);
            }
        },
        Err(_) => 31,
    };
    let command = match cli.command {
        CommandArg::VerifyComplex => Command::VerifyComplex,
        CommandArg::Certify => Command::Certify,
        CommandArg::Cancellation => Command::Cancellation,
        CommandArg::Rank => Command::Rank,
        CommandArg::Pipeline => Command::Pipeline,
        CommandArg::Char2Search => Command::Char2Search,
    };
    let cfg = RunConfig {
        n: cli.n,
        m: cli.m,
        char: if cli.characteristic == "2" { Char::Two } else { Char::Zero },
        seed: cli.seed,
        trials: cli.trials,
        rank_method: match cli.rank_method {
            MethodArg::Modular => RankMethod::ModularProbabilistic,
            MethodArg::Exact => RankMethod::ExactFractionFree,
        },
        grading: match cli.grading {
            GradingArg::Full => Grading::Full,
            GradingArg::Parity => Grading::Parity,
            GradingArg::None => Grading::None,
        },
        prime_bits,
        ..RunConfig::new(command)
    };
    let output = run(&cfg);
    let written = match &cli.out {
        Some(path) => std::fs::write(path, output.text()),
        None => std::io::stdout().lock().write_all(output.text().as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write output: {e}");
        return ExitCode::from(ExitStatus::CheckFailure as u8);
    }
    ExitCode::from(output.status as u8)
}
