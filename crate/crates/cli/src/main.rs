fn main() {
    std::process::exit(clamp4_cli::run(std::env::args_os()));
}
