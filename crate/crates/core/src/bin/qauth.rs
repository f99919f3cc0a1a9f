fn main() {
    std::process::exit(qauth::cli::run(std::env::args_os()));
}
