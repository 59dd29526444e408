use clap::Parser;
use qwalk_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = run(&cli, &mut stdout) {
        eprintln!("qwalk {}: error: {e}", cli.command.name());
        std::process::exit(e.exit_code());
    }
}
