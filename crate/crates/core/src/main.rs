fn main() {
    std::process::exit(mixport::cli::main_with(std::env::args_os()));
}
