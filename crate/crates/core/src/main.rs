use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let status = carlitz::cli::run_from_args(std::env::args_os(), &mut out);
    ExitCode::from(status as u8)
}
