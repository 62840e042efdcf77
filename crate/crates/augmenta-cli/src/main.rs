fn main() {
    std::process::exit(augmenta_cli::run_with_args(std::env::args_os()));
}
