fn main() {
    std::process::exit(minwit::cli_main(std::env::args_os()));
}
