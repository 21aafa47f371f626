fn main() {
    std::process::exit(ionlogic::cli::main_from_env());
}
