fn main() {
    std::process::exit(nvmag::cli::main_entry());
}
