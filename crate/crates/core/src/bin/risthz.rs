fn main() {
    std::process::exit(risthz::cli::main_with_args(std::env::args_os()));
}
