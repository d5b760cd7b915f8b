fn main() {
    std::process::exit(aquasub::cli::main_exit_code());
}
