fn main() {
    std::process::exit(ptbox::cli::run_from(std::env::args_os()));
}
