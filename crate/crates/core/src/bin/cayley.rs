fn main() {
    std::process::exit(cayley_analysis::cli::main_with_args(std::env::args_os()));
}
