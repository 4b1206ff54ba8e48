fn main() {
    std::process::exit(elliptope4::cli::run(std::env::args_os()));
}
