fn main() {
    std::process::exit(z2genus_cli::main_with(std::env::args_os()));
}
