fn main() {
    std::process::exit(ratrec_cli::run_cli(std::env::args_os()));
}
