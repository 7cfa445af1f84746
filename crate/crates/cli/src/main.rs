use std::process::ExitCode;

use clap::Parser;
use stackavg_cli::{run_command, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("STACKAVG_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = run_command(&cli.command);
    let text = report.render(cli.format);
    if report.error.is_some() && cli.format == stackavg_cli::OutputFormat::Human {
        eprint!("{text}");
    } else {
        print!("{text}");
    }
    ExitCode::from(report.exit_code() as u8)
}
