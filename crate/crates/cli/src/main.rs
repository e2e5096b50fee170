fn main() {
    std::process::exit(ftchain::execute(std::env::args_os()));
}
