fn main() {
    std::process::exit(quadcap::cli::main_with_args(std::env::args_os()));
}
