use std::process::ExitCode;

fn main() -> ExitCode {
    lhv_bell::cli::run()
}
