use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mvkit::cli::{self, Invocation, COMMANDS};
use mvkit::Config;

#[derive(Parser, Debug)]
#[command(name = "mvkit", version, about = "MV-algebras, unital l-groups and their representations")]
#[command(after_help = commands_help())]
struct Cli {
    /// Command to run.
    command: String,
    /// Command arguments: names declared in the spec file or inline expressions
    /// (put arguments starting with `-` after `--`).
    args: Vec<String>,
    /// Specification file with group, algebra, term and element declarations.
    #[arg(long)]
    file: Option<PathBuf>,
    /// JSON report on stdout (default).
    #[arg(long, conflicts_with = "pretty")]
    json: bool,
    /// Tabular text report instead of JSON.
    #[arg(long)]
    pretty: bool,
    #[arg(long, default_value_t = Config::default().seed)]
    seed: u64,
    /// Samples drawn by sampled verifications.
    #[arg(long, default_value_t = Config::default().samples)]
    samples: usize,
    /// Largest carrier enumerated explicitly.
    #[arg(long, default_value_t = Config::default().cap)]
    cap: usize,
    /// Rational levels of the nonstandard-reals surrogate.
    #[arg(long, default_value_t = Config::default().surrogate_depth)]
    surrogate_depth: usize,
}

fn commands_help() -> String {
    let mut s = String::from("Commands:\n");
    for (name, synopsis) in COMMANDS {
        s.push_str(&format!("  {name:<12} {synopsis}\n"));
    }
    s
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let spec = match &args.file {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("mvkit: cannot read {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => None,
    };
    let config = Config { samples: args.samples, seed: args.seed, cap: args.cap, surrogate_depth: args.surrogate_depth };
    let report = cli::run(&Invocation { command: args.command, args: args.args, spec, config });
    if let Some(err) = &report.error {
        eprintln!("mvkit: {}", err.message);
    }
    if args.pretty {
        print!("{}", report.to_text());
    } else {
        print!("{}", report.to_json());
    }
    ExitCode::from(report.exit_code() as u8)
}
