use clap::Parser;
use sigresp::cli::{self, Cli};

fn main() {
    let args = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = cli::run(args, &mut stdout.lock()) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
