fn main() {
    std::process::exit(hopfchain::cli::run(std::env::args_os()));
}
