fn main() {
    std::process::exit(cocycle::cli::main());
}
