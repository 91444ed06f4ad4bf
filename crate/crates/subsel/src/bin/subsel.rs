use clap::Parser;

fn main() {
    let cli = subsel::cli::Cli::parse();
    std::process::exit(subsel::cli::run(cli));
}
