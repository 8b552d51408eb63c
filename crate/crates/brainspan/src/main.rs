fn main() {
    std::process::exit(brainspan::cli::run_cli(std::env::args_os()));
}
