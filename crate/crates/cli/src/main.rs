use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use frobchar_cli::{error_json, exit_code, run, Cli, RunConfig};
use frobchar_core::Error;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = Error::domain("args", e.kind().to_string());
            eprint!("{}", error_json(&err));
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let config = RunConfig::from_cli(cli);
    match run(&config) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprint!("{}", error_json(&e));
            ExitCode::from(exit_code(e.category()))
        }
    }
}
