use clap::Parser;

use mwp::cli::{self, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout, errors on stderr
            let _ = e.print();
            let code = if e.exit_code() == 0 { 0 } else { cli::EXIT_ERROR };
            std::process::exit(code);
        }
    };
    std::process::exit(cli::run(&cli));
}
