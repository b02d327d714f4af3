fn main() {
    std::process::exit(epifit::cli::run_command(std::env::args_os()));
}
