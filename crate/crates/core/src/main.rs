use std::process::ExitCode;

use iefsvm::cli::{self, RunError};

fn main() -> ExitCode {
    match cli::run(std::env::args_os()) {
        Ok(out) => {
            for note in &out.notices {
                eprintln!("{note}");
            }
            for path in &out.files {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(RunError::Usage(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            ExitCode::from(code)
        }
        Err(err) => {
            eprintln!("{err}");
            ExitCode::FAILURE
        }
    }
}
