use clap::Parser;

use numprobe_cli::{error_summary, run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut out = std::io::stdout().lock();
    if let Err(e) = run(cli, &mut out) {
        eprintln!("{}", error_summary(&e));
        std::process::exit(1);
    }
}
