use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = panic::catch_unwind(|| opair::cli::run(std::env::args_os())).unwrap_or(opair::cli::EXIT_INTERNAL);
    ExitCode::from(code as u8)
}
