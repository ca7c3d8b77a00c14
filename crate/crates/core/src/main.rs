fn main() {
    std::process::exit(normdyn::cli::main_with_args(std::env::args_os()));
}
