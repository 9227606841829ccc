fn main() {
    std::process::exit(kunneth_core::cli::main_with_args(std::env::args_os()));
}
