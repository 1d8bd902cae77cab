fn main() {
    std::process::exit(dgcyl::cli::run(std::env::args_os()));
}
