fn main() {
    std::process::exit(kappa::cli::main());
}
