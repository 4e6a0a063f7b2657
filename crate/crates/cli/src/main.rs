use std::process::ExitCode;

use clap::Parser;
use omdyn_cli::{exit, run, Cli};

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = run(&cli, &argv[1..]);
    match (&outcome.envelope, cli.json) {
        (Some(envelope), true) => match serde_json::to_string_pretty(envelope) {
            Ok(text) => println!("{text}"),
            Err(e) => eprintln!("serializing report: {e}"),
        },
        _ if outcome.code == exit::USAGE => {
            for line in &outcome.summary {
                eprintln!("error: {line}");
            }
            eprintln!("usage: omdyn <classify|abel|hypvec|examples|iterate> --symbol <label> [options]");
        }
        _ => {
            for line in &outcome.summary {
                println!("{line}");
            }
        }
    }
    ExitCode::from(outcome.code as u8)
}
