fn main() {
    std::process::exit(hypdisc::cli::run());
}
