fn main() {
    std::process::exit(hookwalg::cli::run(std::env::args_os()));
}
