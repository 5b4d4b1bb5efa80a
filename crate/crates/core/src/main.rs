fn main() {
    std::process::exit(equivocation::cli::run(std::env::args_os()));
}
