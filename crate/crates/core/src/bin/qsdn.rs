fn main() {
    std::process::exit(qsdn::cli::main_with_args(std::env::args_os()));
}
