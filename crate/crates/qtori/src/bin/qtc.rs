fn main() {
    std::process::exit(qtori::cli_main());
}
