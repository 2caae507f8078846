fn main() {
    std::process::exit(scoredyn::cli::run(std::env::args_os()));
}
