//! `rhrel`: JSON in, JSON out front end for the `rhrel` library.
//!
//! Exit codes: 0 success, 1 selftest failures, 2 invalid input or usage,
//! 3 mathematical precondition failure, 4 I/O error. Errors are reported on
//! stdout as `{"error": {"kind": .., "detail": ..}}` and on stderr as text.

mod commands;
mod config;
mod document;
mod failure;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser};
use serde_json::Value;

use commands::{truncate_document, Invocation, Registry};
use config::Config;
use document::Document;
use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "rhrel", version, about = "Logarithmic connections over C[t]/(t^m)")]
struct Args {
    /// Command to run (see the list below).
    command: String,
    /// Input JSON files.
    inputs: Vec<PathBuf>,
    /// Relative tolerance for identity checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Eigenvalue clustering tolerance.
    #[arg(long)]
    cluster_tol: Option<f64>,
    /// Singular-value cutoff.
    #[arg(long)]
    zero_tol: Option<f64>,
    /// Truncation order: cuts inputs down to C[t]/(t^m); order for galois-example.
    #[arg(long)]
    m: Option<usize>,
    /// Twist degree.
    #[arg(long, allow_negative_numbers = true)]
    k: Option<i64>,
    /// Seed for selftest.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of selftest cases.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Worker threads for selftest.
    #[arg(long, default_value_t = 4)]
    threads: usize,
    /// Matrix exponential strategy.
    #[arg(long)]
    exp: Option<String>,
    /// Pretty-print the output.
    #[arg(long)]
    pretty: bool,
}

fn execute(args: Args, registry: &Registry) -> Result<(Value, i32), Failure> {
    let mut config = Config::from_env()?;
    if let Some(v) = args.tol {
        config.check_tol = v;
    }
    if let Some(v) = args.cluster_tol {
        config.cluster_tol = v;
    }
    if let Some(v) = args.zero_tol {
        config.zero_tol = v;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.exp {
        config.exp = v;
    }
    let ctx = config.context()?;
    let command = registry.get(&args.command)?;
    if args.inputs.len() != command.arity() {
        return Err(Failure::usage(format!(
            "{} takes {} input file(s), got {}",
            command.name(),
            command.arity(),
            args.inputs.len()
        )));
    }
    let mut inputs = Vec::new();
    for path in &args.inputs {
        let mut doc = Document::load(path)?;
        if let (Some(m), true) = (args.m, command.truncates_inputs()) {
            doc = truncate_document(doc, m)?;
        }
        inputs.push(doc);
    }
    let inv = Invocation {
        inputs,
        config,
        ctx,
        m: args.m,
        k: args.k,
        cases: args.cases,
        threads: args.threads,
    };
    let out = command.run(&inv)?;
    let code = command.exit_code(&out);
    Ok((out, code))
}

fn print(v: &Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("values always serialize");
    println!("{text}");
}

fn main() -> ExitCode {
    let registry = Registry::default();
    let cli = Args::command().after_help(format!("Commands:\n{}", registry.summary()));
    let args = match cli.try_get_matches().and_then(|m| Args::from_arg_matches(&m)) {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::usage(e.kind().to_string());
            print(&f.to_json(), false);
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let pretty = args.pretty;
    match execute(args, &registry) {
        Ok((out, code)) => {
            print(&out, pretty);
            ExitCode::from(code as u8)
        }
        Err(f) => {
            print(&f.to_json(), pretty);
            eprintln!("rhrel: {f}");
            ExitCode::from(f.code() as u8)
        }
    }
}
