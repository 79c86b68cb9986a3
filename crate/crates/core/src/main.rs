fn main() {
    std::process::exit(optical_smp::cli::run(std::env::args_os()));
}
