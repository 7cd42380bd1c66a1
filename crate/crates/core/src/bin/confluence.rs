fn main() {
    std::process::exit(virasoro_confluence::cli::main_from(std::env::args_os()));
}
