fn main() {
    std::process::exit(bezmesh::cli::run(std::env::args_os()));
}
