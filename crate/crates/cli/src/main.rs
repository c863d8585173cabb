use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use modone_cli::{output_dir, run, write_files, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dir = output_dir(&cli);
    let outcome = run(cli);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    if let Some(msg) = &outcome.diagnostic {
        eprintln!("modone: {msg}");
    }
    if let Some(dir) = dir {
        if !outcome.files.is_empty() {
            if let Err(e) = write_files(&dir, &outcome.files) {
                eprintln!("modone: cannot write {}: {e}", dir.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
