mod args;
mod cmd_ap;
mod cmd_deps;
mod cmd_evaluate;
mod cmd_explain;
mod cmd_generate;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, Outcome};

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Ap(a) => cmd_ap::run(a, cli.format),
        Command::Evaluate(a) => cmd_evaluate::run(a, cli.format),
        Command::Explain(a) => cmd_explain::run(a, cli.format),
        Command::Deps(a) => cmd_deps::run(a, cli.format),
        Command::Generate(a) => cmd_generate::run(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
