fn main() {
    std::process::exit(dhm::cli::run(std::env::args_os()));
}
