fn main() {
    std::process::exit(chevalley::cli::main());
}
