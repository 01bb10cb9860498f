fn main() {
    std::process::exit(cantor::cli::main_with(std::env::args_os()));
}
