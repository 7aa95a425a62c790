fn main() {
    std::process::exit(isolab::cli::main(std::env::args_os()));
}
