fn main() {
    std::process::exit(zassenhaus::cli::run(std::env::args_os()));
}
