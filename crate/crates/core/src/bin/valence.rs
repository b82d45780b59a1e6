fn main() {
    std::process::exit(valence_core::cli::main_with(std::env::args_os()));
}
