use std::io::{stderr, stdout};
use std::process::ExitCode;

fn main() -> ExitCode {
    let (mut out, mut err) = (stdout().lock(), stderr().lock());
    let code = congruence_lab_cli::run(std::env::args_os(), &mut congruence_lab_cli::Io { out: &mut out, err: &mut err });
    ExitCode::from(code as u8)
}
