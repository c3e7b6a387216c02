fn main() {
    std::process::exit(gwm::cli::run(std::env::args_os()));
}
