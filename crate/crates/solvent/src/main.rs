fn main() {
    std::process::exit(solvent::cli::main_with_args(std::env::args_os()));
}
