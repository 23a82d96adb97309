fn main() {
    std::process::exit(coarse_lab::cli::main_with_args(std::env::args_os()));
}
