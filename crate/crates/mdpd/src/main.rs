use clap::Parser;
use mdpd::cli::{run, Cli};

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("mdpd: {e}");
        std::process::exit(e.exit_code());
    }
}
