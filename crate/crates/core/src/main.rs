fn main() {
    std::process::exit(gomea_trap::cli::main_with_args(std::env::args_os()));
}
