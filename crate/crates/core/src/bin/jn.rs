fn main() {
    std::process::exit(dyadic_jn::cli::run(std::env::args_os()));
}
