fn main() {
    std::process::exit(seedmask_cli::run(std::env::args_os()));
}
