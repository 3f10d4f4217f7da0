use std::process::ExitCode;

use clap::Parser;

use bggfe::cli::{execute, CliError, RunConfig};

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    match execute(&cfg) {
        Ok(out) => {
            if let Some(path) = &cfg.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                for f in &out.failures {
                    eprintln!("FAILED: {f}");
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, CliError::Mesh(_)) {
                eprintln!("{}", bggfe::cli::mesh_help());
            }
            ExitCode::from(2)
        }
    }
}
