use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use susyhier::cli::{execute, Cli, EXIT_CONFIG};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = execute(&cli);
    for w in &outcome.warnings {
        eprintln!("{w}");
    }
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(outcome.output.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::from(EXIT_CONFIG);
    }
    ExitCode::from(outcome.exit_code)
}
