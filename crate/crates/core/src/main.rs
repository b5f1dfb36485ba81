fn main() {
    std::process::exit(patchwork::cli::main_with_args(std::env::args_os()));
}
