fn main() {
    std::process::exit(incl_verify::cli::main_with_args(std::env::args_os()));
}
