fn main() {
    std::process::exit(sawtrace_cli::main_with_args(std::env::args_os()));
}
