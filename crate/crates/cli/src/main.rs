fn main() {
    std::process::exit(relop_cli::main_with_env());
}
