use std::process::ExitCode;

fn main() -> ExitCode {
    tencusps::cli::run(std::env::args_os())
}
