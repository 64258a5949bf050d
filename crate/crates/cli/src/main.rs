fn main() {
    std::process::exit(tedsc_cli::run(std::env::args_os()));
}
