use clap::Parser;

fn main() {
    let cli = landaucap::Cli::parse();
    std::process::exit(landaucap::run(&cli));
}
