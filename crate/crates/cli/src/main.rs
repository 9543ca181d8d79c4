use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use qi_cli::app::{one_line, run, Cli};

fn fail(msg: &str) -> ExitCode {
    eprintln!("qi: error: {}", one_line(msg));
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // clap's first line carries the diagnostic; usage and tips are dropped
            let text = e.render().to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            return fail(first.trim_start_matches("error: "));
        }
    };
    match run(cli) {
        Ok(out) => {
            if let Some((path, data)) = &out.plot {
                if let Err(e) = std::fs::write(path, data) {
                    return fail(&format!("{}: {e}", path.display()));
                }
            }
            print!("{}", out.csv);
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e.to_string()),
    }
}
