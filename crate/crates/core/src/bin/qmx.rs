use clap::Parser;
use qmx::cli::{dispatch, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(dispatch(&cli));
}
