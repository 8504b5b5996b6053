fn main() {
    std::process::exit(lpsynth_cli::run(std::env::args_os()));
}
