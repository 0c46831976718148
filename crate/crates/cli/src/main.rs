use clap::Parser;
use clap::error::ErrorKind;

use xjacobi_cli::{run, usage, Args};

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return;
        }
        Err(e) => {
            eprintln!("{e}\n{}", usage());
            std::process::exit(1);
        }
    };
    match run(&args) {
        Ok(summary) => println!("{}: all {} checks passed", summary.experiment, summary.checks.len()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.code);
        }
    }
}
