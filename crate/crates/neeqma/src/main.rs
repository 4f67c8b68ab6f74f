fn main() {
    std::process::exit(neeqma::cli::run());
}
