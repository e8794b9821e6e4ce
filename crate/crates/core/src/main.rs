use std::process::ExitCode;

use descent_roots::cli::{parse_args, run, CliError};

fn main() -> ExitCode {
    let code = match parse_args(std::env::args_os()) {
        Ok(job) => run(&job),
        Err(CliError::Info(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
