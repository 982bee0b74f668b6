use std::io;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use tenbound_cli::args::Cli;
use tenbound_cli::error::EXIT_PARSE;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_PARSE,
            };
            return ExitCode::from(code as u8);
        }
    };
    let code = tenbound_cli::run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
