//! Config-driven workbench over the `ncgeom` engine.

pub mod commands;
pub mod config;
pub mod output;

use commands::Command;
use config::{Format, QMode};
use output::Outcome;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
}

/// Rendering options from the command line; unset fields fall back to
/// the config file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub format: Option<Format>,
    pub q: Option<QMode>,
    pub check_all: bool,
}

/// Loads `config`, runs `cmd` and renders the outcome.
pub fn execute(cmd: &Command, config: &str, opts: Options) -> Result<(Outcome, String), CliError> {
    let loaded = config::load(config)?;
    let setup = loaded.config.setup()?;
    let items = commands::run(cmd, &setup, opts.check_all)?;
    let command = cmd.name();
    let outcome = Outcome {
        digest: output::digest(&command, &loaded.text),
        command,
        config: loaded.name,
        items,
    };
    let format = opts.format.unwrap_or(loaded.config.output.format);
    let q = opts.q.unwrap_or(setup.q);
    let text = outcome.render(format, q);
    Ok((outcome, text))
}
