use std::io::Write;
use std::process::ExitCode;

use atoric_workbench::cli::{run, Cli, Command, EXIT_VALIDATION};
use atoric_workbench::server::serve;
use atoric_workbench::session::Registry;
use clap::Parser;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if let Ok(Cli { command: Command::Serve { bind, journal }, .. }) = Cli::try_parse_from(&args) {
        let registry = match journal {
            Some(path) => match Registry::with_journal(&path) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: journal {}: {e}", path.display());
                    return ExitCode::from(EXIT_VALIDATION as u8);
                }
            },
            None => Registry::new(),
        };
        let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
        return match rt.block_on(serve(&bind, registry)) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {bind}: {e}");
                ExitCode::from(EXIT_VALIDATION as u8)
            }
        };
    }
    let (code, text) = run(&args);
    if !text.is_empty() {
        let line = format!("{}\n", text.trim_end());
        let _ = if code == 0 { std::io::stdout().write_all(line.as_bytes()) } else { std::io::stderr().write_all(line.as_bytes()) };
    }
    ExitCode::from(code as u8)
}
