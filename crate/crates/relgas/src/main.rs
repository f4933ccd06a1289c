use std::process::ExitCode;

fn main() -> ExitCode {
    relgas::cli::main_entry()
}
