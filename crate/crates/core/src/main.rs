use clap::Parser;

fn main() {
    let cli = premia::cli::Cli::parse();
    if let Err(e) = premia::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
