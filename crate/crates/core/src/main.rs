fn main() {
    std::process::exit(airy4::cli::main_with(std::env::args_os()));
}
