fn main() {
    std::process::exit(ringopo_cli::main_with_args(std::env::args_os()));
}
