fn main() {
    std::process::exit(fairineq_cli::run(std::env::args_os()));
}
