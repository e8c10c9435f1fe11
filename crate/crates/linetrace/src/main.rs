fn main() {
    std::process::exit(linetrace::harness::cli::run_cli());
}
