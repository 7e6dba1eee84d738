fn main() {
    std::process::exit(smoothsum_cli::run(std::env::args().collect()));
}
