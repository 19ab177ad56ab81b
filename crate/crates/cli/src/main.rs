fn main() {
    std::process::exit(trsll::run(std::env::args_os()));
}
