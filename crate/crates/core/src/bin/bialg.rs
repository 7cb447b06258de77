use clap::Parser;

fn main() {
    let args = bialg_core::cli::Args::parse();
    std::process::exit(bialg_core::cli::main_with(&args));
}
