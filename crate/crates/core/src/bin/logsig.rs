fn main() {
    std::process::exit(logsig::cli::main_with_args(std::env::args_os()));
}
