fn main() {
    std::process::exit(latret_cli::main_with_args(std::env::args_os()));
}
