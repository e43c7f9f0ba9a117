fn main() {
    std::process::exit(almostrich::cli::run(std::env::args_os()));
}
