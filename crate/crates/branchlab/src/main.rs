use std::io::Write;
use std::process::ExitCode;

use branchlab::commands::{run, Cli};
use branchlab::{budget_from_env, CliError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = budget_from_env().and_then(|budget| run(&cli, budget));
    match result {
        Ok(out) => {
            print!("{}", out.render(cli.json));
            let _ = std::io::stdout().flush();
            ExitCode::from(out.code)
        }
        Err(e) => report(&e, cli.json),
    }
}

fn report(e: &CliError, json: bool) -> ExitCode {
    if json {
        println!("{}", serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
    }
    eprintln!("branchlab: {e}");
    ExitCode::from(e.exit_code())
}
