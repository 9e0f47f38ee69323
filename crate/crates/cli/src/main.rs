fn main() {
    std::process::exit(povsim_cli::main_with_args(std::env::args_os()));
}
