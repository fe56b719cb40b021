use std::process::ExitCode;

fn main() -> ExitCode {
    helix4::cli::run()
}
