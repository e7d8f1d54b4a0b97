fn main() {
    std::process::exit(klpe::harness::cli::cli_dispatch(std::env::args_os()));
}
