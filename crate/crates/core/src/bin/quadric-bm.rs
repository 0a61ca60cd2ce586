fn main() {
    std::process::exit(quadric_bm::cli::run(std::env::args_os()));
}
