use std::process::ExitCode;

fn main() -> ExitCode {
    edgeaware::cli::main_entry()
}
