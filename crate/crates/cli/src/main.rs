use std::process::ExitCode;

fn main() -> ExitCode {
    let (outcome, as_json) = nvtorus_cli::run_args(std::env::args_os());
    let rendered = outcome.render(as_json);
    if outcome.exit == nvtorus_cli::EXIT_ERROR && !as_json {
        eprintln!("{rendered}");
    } else {
        println!("{rendered}");
    }
    ExitCode::from(outcome.exit as u8)
}
