use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use dforge_core::cli::{
    cmd_example35, exit_code, parse_document, run_command, Options, Workspace, COMMANDS,
};
use dforge_core::error::{Error, Result};

/// Exact computations with rank-two Drinfeld F_q[T]-modules.
#[derive(Parser, Debug)]
#[command(name = "dforge", version)]
struct Args {
    /// One of: verify, degree, dual, j, find, project, classify, star-orbit, example35
    command: String,
    /// JSON job document (not needed for example35)
    #[arg(long = "in")]
    input: Option<String>,
    /// Seed for the factorization randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// tau-degree bound for non-CM certificates
    #[arg(long)]
    certify_bound: Option<usize>,
    /// Worker threads for orbit expansion
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Field size for example35
    #[arg(long, default_value_t = 3)]
    q: u64,
}

fn run(args: &Args) -> Result<serde_json::Value> {
    let opts = Options {
        seed: args.seed,
        certify_bound: args.certify_bound,
        jobs: args.jobs.max(1),
    };
    if !COMMANDS.contains(&args.command.as_str()) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("unknown command '{}'", args.command),
        });
    }
    if args.command == "example35" {
        return cmd_example35(args.q, &opts);
    }
    let path = args.input.as_ref().ok_or_else(|| Error::Parse {
        pos: 0,
        msg: "--in is required".into(),
    })?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        pos: 0,
        msg: format!("cannot read {path}: {e}"),
    })?;
    let ws = Workspace::load(parse_document(&text)?, opts.seed)?;
    run_command(&args.command, &ws, &opts)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&args) {
        Ok(v) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&v).expect("json output")
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                Error::Parse { pos, msg } => {
                    eprintln!("dforge: parse error at position {pos}: {msg}")
                }
                other => eprintln!("dforge: {other}"),
            }
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
