fn main() {
    std::process::exit(rado_lab::cli::main_with_args(std::env::args_os()));
}
