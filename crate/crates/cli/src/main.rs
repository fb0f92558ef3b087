fn main() {
    std::process::exit(macrocat_cli::run(std::env::args_os()));
}
