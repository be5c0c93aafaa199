fn main() {
    std::process::exit(principal_cli::run(std::env::args_os()));
}
