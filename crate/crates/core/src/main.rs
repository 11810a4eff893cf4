fn main() {
    std::process::exit(prime_spectrum::cli::main_with_args(std::env::args_os()));
}
