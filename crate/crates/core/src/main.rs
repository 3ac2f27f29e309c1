use clap::Parser;

fn main() {
    let cli = quartic_genus::cli::Cli::parse();
    std::process::exit(quartic_genus::cli::run(cli));
}
