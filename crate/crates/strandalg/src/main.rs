fn main() {
    std::process::exit(strandalg::cli::run());
}
