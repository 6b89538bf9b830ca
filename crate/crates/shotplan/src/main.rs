fn main() {
    std::process::exit(shotplan::cli::run_from_env());
}
