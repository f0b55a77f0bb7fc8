fn main() {
    std::process::exit(magic_meter::cli::main());
}
