use clap::Parser;

fn main() {
    let cli = a11y_cli::Cli::parse();
    if let Err(e) = a11y_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
