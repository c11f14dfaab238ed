fn main() {
    std::process::exit(mahler_cli::run(std::env::args_os()));
}
