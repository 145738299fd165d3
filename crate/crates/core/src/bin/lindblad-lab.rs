fn main() {
    std::process::exit(lindblad_lab::cli::run(std::env::args_os()));
}
