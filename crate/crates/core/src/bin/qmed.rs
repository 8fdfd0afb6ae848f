fn main() {
    std::process::exit(qmed::cli::run(std::env::args_os()));
}
