fn main() {
    std::process::exit(greenrecon::cli::main_with_args(std::env::args_os()));
}
