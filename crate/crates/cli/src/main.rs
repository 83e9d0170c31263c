fn main() {
    std::process::exit(eprsim_cli::run(std::env::args_os()));
}
