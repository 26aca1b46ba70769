fn main() {
    std::process::exit(dquint_cli::run(std::env::args_os()));
}
