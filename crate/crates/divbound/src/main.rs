use std::process::ExitCode;

fn main() -> ExitCode {
    divbound::cli::main_with(std::env::args_os())
}
