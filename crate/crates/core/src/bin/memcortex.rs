fn main() {
    std::process::exit(memcortex::cli::main_with_args(std::env::args_os()));
}
