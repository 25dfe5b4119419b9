fn main() {
    std::process::exit(linkgrasp::cli::main_with_args(std::env::args_os()));
}
