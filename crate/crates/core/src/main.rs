fn main() {
    std::process::exit(hdab::bench::cli::main_with_args(std::env::args_os()));
}
