use clap::Parser;
use robscreen::cli::{run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let arguments = std::env::args().skip(1).collect();
    if let Err(e) = run(cli, arguments) {
        eprintln!("robscreen: {e}");
        std::process::exit(e.exit_status() as i32);
    }
}
