fn main() {
    std::process::exit(stlocus::cli::run_cli(std::env::args_os()));
}
