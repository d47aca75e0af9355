fn main() {
    std::process::exit(wem::cli::run());
}
