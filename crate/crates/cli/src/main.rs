fn main() {
    std::process::exit(trackbench_cli::run(std::env::args_os()));
}
