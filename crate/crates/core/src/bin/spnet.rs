fn main() {
    std::process::exit(spnet::cli::run_from_args(std::env::args_os()));
}
