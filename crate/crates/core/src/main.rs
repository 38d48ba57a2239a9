fn main() {
    std::process::exit(rcmix::cli::run(std::env::args_os()));
}
