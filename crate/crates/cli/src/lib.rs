//! Library side of the `seqbf` command-line tool.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;

use args::{Cli, Command};
use error::CliResult;

/// Run one parsed invocation and return what goes to stdout.
pub fn run(cli: &Cli) -> CliResult<String> {
    let doc = match &cli.command {
        Command::Seqbf(a) => commands::seqbf(a),
        Command::Exactbf(a) => commands::exactbf(a),
        Command::Calibrate(a) => commands::calibrate(a),
        Command::Correct(a) => commands::correct(a),
        Command::Scan(a) => commands::scan(a),
        Command::Ttest(a) => commands::ttest(a),
        Command::Report(a) => commands::report(a),
        Command::Fitdata(a) => commands::fitdata(a),
    }?;
    Ok(doc.render(cli.format))
}
