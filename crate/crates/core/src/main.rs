fn main() {
    std::process::exit(fucik::cli::run(std::env::args_os()));
}
