fn main() {
    std::process::exit(klein_cli::run(std::env::args_os()));
}
