fn main() {
    std::process::exit(pascal_sieve::cli::main_with_args(std::env::args_os()));
}
