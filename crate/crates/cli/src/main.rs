use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use poisson_workbench_cli::input::parse_input;
use poisson_workbench_cli::report::Format;
use poisson_workbench_cli::run::{run, Command, Config};

/// Exact checks on polynomial and exterior Poisson structures.
#[derive(Debug, Parser)]
#[command(name = "poisson-wb", version)]
struct Args {
    command: Command,
    /// JSON structure document.
    #[arg(long)]
    input: PathBuf,
    /// Scaling-weight window `[-W, W]` of the cochain side.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
    window: i64,
    /// Largest total arity of the gravity relations.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(3..))]
    arity: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with 3 when a check was skipped for a failed precondition.
    #[arg(long)]
    strict: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let document = match std::fs::read_to_string(&args.input) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let pi = match parse_input(&document) {
        Ok(pi) => pi,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(2);
        }
    };
    let config = Config {
        window: args.window,
        arity: args.arity as usize,
    };
    let report = run(args.command, &pi, config);
    let text = report.render(args.format);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(name) = &report.verdict.first_failure {
        eprintln!("first failing check: {name}");
    }
    ExitCode::from(report.exit_code(args.strict) as u8)
}
