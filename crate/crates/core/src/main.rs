fn main() {
    std::process::exit(lsbm::cli::run(std::env::args_os()));
}
