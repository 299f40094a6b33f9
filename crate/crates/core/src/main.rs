fn main() {
    std::process::exit(numspec::cli::run(std::env::args_os()));
}
