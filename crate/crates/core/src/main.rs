fn main() {
    std::process::exit(symprog::cli::main_with(std::env::args_os()));
}
