fn main() {
    std::process::exit(point_interaction::cli::run(std::env::args_os()));
}
