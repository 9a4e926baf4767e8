fn main() {
    std::process::exit(modlie::cli::run(std::env::args_os()));
}
