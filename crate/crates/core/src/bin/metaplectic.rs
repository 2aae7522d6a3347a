fn main() {
    std::process::exit(metaplectic::cli::run(std::env::args_os()));
}
