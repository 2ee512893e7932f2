fn main() {
    std::process::exit(weibull_mlqe::cli::run(std::env::args_os()));
}
