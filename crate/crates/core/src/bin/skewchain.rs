fn main() {
    std::process::exit(skewchain::cli::run(std::env::args_os()));
}
