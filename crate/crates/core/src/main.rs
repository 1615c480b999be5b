use clap::Parser;

fn main() {
    let cli = pickpeak::cli::Cli::parse();
    std::process::exit(pickpeak::cli::run(&cli));
}
