use clap::Parser;
use moonboot::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    ) {
        eprintln!("moonboot: {e}");
        std::process::exit(1);
    }
}
