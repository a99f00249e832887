fn main() {
    std::process::exit(hcran_cli::run(std::env::args_os()));
}
