fn main() {
    std::process::exit(eigenseq::cli::main_with_args(std::env::args_os()));
}
