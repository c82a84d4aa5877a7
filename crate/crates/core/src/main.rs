use std::process::ExitCode;

fn main() -> ExitCode {
    st0_core::cli::main_entry()
}
