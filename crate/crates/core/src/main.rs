fn main() {
    std::process::exit(torelli::cli::run());
}
