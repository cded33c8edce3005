use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = ccel::cli::dispatch(std::env::args_os());
    let out = if outcome.report.is_none() && outcome.code != 0 {
        std::io::stderr().write_all(outcome.output.as_bytes())
    } else {
        std::io::stdout().write_all(outcome.output.as_bytes())
    };
    if out.is_err() {
        return ExitCode::from(3);
    }
    ExitCode::from(outcome.code as u8)
}
