use std::process::ExitCode;

use clap::Parser;
use ncgeom_cli::commands::Command;
use ncgeom_cli::config::{builtin_names, Format, QMode};
use ncgeom_cli::{execute, Options};

#[derive(Debug, Parser)]
#[command(name = "ncgeom", version, about = "Exact curvature and embedding computations over q-deformed algebras")]
struct Cli {
    /// Config file path or builtin name.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Overrides `[output] format`.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Keep q formal or specialize outputs at q = 1.
    #[arg(long, global = true, value_enum)]
    q: Option<QMode>,
    /// Append validation, Levi-Civita and Gauss checks to the output.
    #[arg(long, global = true)]
    check_all: bool,
    #[command(subcommand)]
    command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(config) = cli.config else {
        eprintln!("error: --config <path> is required; builtin configs: {}", builtin_names());
        return ExitCode::from(2);
    };
    let opts = Options {
        format: cli.format,
        q: cli.q,
        check_all: cli.check_all,
    };
    match execute(&cli.command, &config, opts) {
        Ok((outcome, text)) => {
            print!("{text}");
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
