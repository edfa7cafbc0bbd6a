fn main() {
    std::process::exit(pngauss::cli::main_with_args(std::env::args_os()));
}
