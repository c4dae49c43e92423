use clap::Parser;

fn main() {
    std::process::exit(steer3q::cli::run(steer3q::cli::Cli::parse()));
}
