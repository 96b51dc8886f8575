fn main() {
    std::process::exit(realcstar_cli::run(std::env::args_os()));
}
