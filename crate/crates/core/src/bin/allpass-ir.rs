fn main() {
    std::process::exit(allpass_ir::cli::run(std::env::args_os()));
}
