fn main() {
    std::process::exit(povmlab::cli::run(std::env::args_os()));
}
