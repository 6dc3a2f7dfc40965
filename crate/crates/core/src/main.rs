use std::process::ExitCode;

use clap::Parser;
use motivic::cli::{error_json, run, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            println!("{}", rep.render(cli.common.format));
            ExitCode::from(rep.exit_code() as u8)
        }
        Err(e) => {
            if cli.common.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&error_json(&e)).expect("error serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
