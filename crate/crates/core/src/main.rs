fn main() {
    std::process::exit(gl2lab::cli::run(std::env::args()));
}
