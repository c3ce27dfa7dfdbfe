fn main() {
    std::process::exit(shiftlab::cli_main());
}
