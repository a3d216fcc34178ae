use clap::error::ErrorKind;
use clap::Parser;

use pseudobracket::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            std::process::exit(cli::EXIT_OK);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(cli::EXIT_USAGE);
        }
    };
    let out = cli::run(cli);
    if out.exit_code == cli::EXIT_OK || out.exit_code == cli::EXIT_VIOLATION {
        println!("{}", out.payload);
    } else {
        eprintln!("{}", out.payload);
    }
    std::process::exit(out.exit_code);
}
