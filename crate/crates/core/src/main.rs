fn main() {
    std::process::exit(bovdyn::cli::main_with_args(std::env::args_os()));
}
