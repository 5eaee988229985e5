use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = gabor_pou::cli::run_from_args(std::env::args_os());
    if !outcome.report.is_null() {
        let text = serde_json::to_string_pretty(&outcome.report).expect("reports are valid JSON");
        // A closed pipe (e.g. `| head`) is not an error worth reporting.
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    if let Some(msg) = &outcome.stderr {
        let _ = writeln!(std::io::stderr().lock(), "{msg}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
