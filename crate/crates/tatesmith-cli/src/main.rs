use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tatesmith_cli::{run, Command, Flags};

/// Tate cohomology, parity and Smith theory for Z/p on finite stratified posets.
#[derive(Parser, Debug)]
#[command(name = "tatesmith", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Input JSON documents.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Override the prime of every input document.
    #[arg(long)]
    p: Option<u64>,
    /// Print the JSON report instead of tables.
    #[arg(long)]
    json: bool,
    /// Degree at which Tate cohomology is read.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<i64>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let flags = Flags { p: args.p, window: args.window, seed: args.seed };
    match run(args.command, &args.inputs, &flags) {
        Ok(report) => {
            if args.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
