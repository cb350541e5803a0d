fn main() {
    std::process::exit(newsreuse::cli::main_with_args(std::env::args_os()));
}
