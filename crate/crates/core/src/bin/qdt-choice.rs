fn main() {
    std::process::exit(qdt_choice::cli::run(std::env::args_os()));
}
